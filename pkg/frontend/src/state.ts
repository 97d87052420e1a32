/**
 * Console session state. Pure data and transitions, no DOM: the UI layer
 * reads from here and never computes answers itself.
 */

import type { Answer, ImageInfo, LocationAnswer } from "./types.js";

export interface HistoryEntry {
  question: string;
  answer: Answer;
}

export class ConsoleState {
  private imageList: ImageInfo[] = [];
  private selectedImageId: string | null = null;
  private readonly entries: HistoryEntry[] = [];
  private readonly hidden = new Set<string>();
  private lastLocationEntry: HistoryEntry | null = null;

  get images(): readonly ImageInfo[] {
    return this.imageList;
  }

  setImages(images: ImageInfo[]): void {
    this.imageList = images.slice();
    if (this.selectedImageId !== null && !this.has(this.selectedImageId)) {
      this.selectedImageId = null;
    }
  }

  private has(id: string): boolean {
    return this.imageList.some((img) => img.id === id);
  }

  /** Selecting an unknown id is a no-op; selected id stays in the list. */
  select(id: string): boolean {
    if (!this.has(id)) return false;
    this.selectedImageId = id;
    return true;
  }

  get selected(): ImageInfo | null {
    if (this.selectedImageId === null) return null;
    return this.imageList.find((img) => img.id === this.selectedImageId) ?? null;
  }

  get history(): readonly HistoryEntry[] {
    return this.entries;
  }

  /** Append-only; a location answer resets the class toggles to all-visible. */
  append(question: string, answer: Answer): HistoryEntry {
    const entry: HistoryEntry = { question, answer };
    this.entries.push(entry);
    if (answer.task === "location") {
      this.lastLocationEntry = entry;
      this.hidden.clear();
    }
    return entry;
  }

  get lastLocation(): LocationAnswer | null {
    const answer = this.lastLocationEntry?.answer;
    return answer && answer.task === "location" ? answer : null;
  }

  /**
   * Flip one class overlay on the last location answer. Labels the answer
   * does not mention are a no-op so stale buttons cannot poison the set.
   */
  toggle(label: string): boolean {
    const answer = this.lastLocation;
    if (!answer || !answer.entities.includes(label)) return false;
    if (this.hidden.has(label)) this.hidden.delete(label);
    else this.hidden.add(label);
    return true;
  }

  isHidden(label: string): boolean {
    return this.hidden.has(label);
  }

  get hiddenClasses(): ReadonlySet<string> {
    return this.hidden;
  }
}
