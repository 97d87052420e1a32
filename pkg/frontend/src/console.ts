/**
 * DOM wiring. Every number, flag, and box shown here is verbatim from the
 * API response; this layer only formats, scales, and draws.
 */

import { ApiClient, ApiError, QueryRejectedError } from "./api.js";
import { drawOverlay, overlayRects, scaleFactor } from "./overlay.js";
import { ConsoleState, type HistoryEntry } from "./state.js";
import { colorFor } from "./palette.js";
import type { Answer, ImageInfo } from "./types.js";

function el<T extends HTMLElement>(root: ParentNode, selector: string): T {
  const node = root.querySelector(selector);
  if (!node) throw new Error(`missing element ${selector}`);
  return node as T;
}

export class ConsoleApp {
  private readonly imageList: HTMLElement;
  private readonly photo: HTMLImageElement;
  private readonly canvas: HTMLCanvasElement;
  private readonly toggles: HTMLElement;
  private readonly form: HTMLFormElement;
  private readonly questionInput: HTMLInputElement;
  private readonly askButton: HTMLButtonElement;
  private readonly errorBox: HTMLElement;
  private readonly historyList: HTMLElement;

  private pending = false;
  /** Image the current overlay belongs to; cleared when selection moves. */
  private overlayImageId: string | null = null;

  constructor(
    root: ParentNode,
    private readonly api: ApiClient,
    private readonly state: ConsoleState,
  ) {
    this.imageList = el(root, "#image-list");
    this.photo = el(root, "#photo");
    this.canvas = el(root, "#boxes");
    this.toggles = el(root, "#toggles");
    this.form = el(root, "#ask-form");
    this.questionInput = el(root, "#question");
    this.askButton = el(root, "#ask-button");
    this.errorBox = el(root, "#error");
    this.historyList = el(root, "#history");
  }

  async init(): Promise<void> {
    this.form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      void this.submit();
    });
    this.photo.addEventListener("load", () => this.fitCanvas());
    window.addEventListener("resize", () => this.fitCanvas());
    try {
      this.state.setImages(await this.api.listImages());
    } catch (err) {
      this.showError(`could not load images: ${describe(err)}`);
    }
    this.renderImageList();
  }

  private renderImageList(): void {
    this.imageList.textContent = "";
    if (this.state.images.length === 0) {
      const empty = document.createElement("li");
      empty.className = "empty";
      empty.textContent = "no images loaded";
      this.imageList.appendChild(empty);
      return;
    }
    for (const info of this.state.images) {
      const item = document.createElement("li");
      const button = document.createElement("button");
      button.type = "button";
      button.textContent = info.id;
      button.addEventListener("click", () => this.selectImage(info));
      const badge = document.createElement("span");
      badge.className = "badge";
      badge.textContent = describeClasses(info);
      item.appendChild(button);
      item.appendChild(badge);
      if (this.state.selected?.id === info.id) item.classList.add("current");
      this.imageList.appendChild(item);
    }
  }

  private selectImage(info: ImageInfo): void {
    if (!this.state.select(info.id)) return;
    this.overlayImageId = null;
    this.clearCanvas();
    this.toggles.textContent = "";
    this.photo.src = this.api.imageUrl(info.id);
    this.photo.alt = info.id;
    this.renderImageList();
  }

  private fitCanvas(): void {
    this.canvas.width = this.photo.clientWidth;
    this.canvas.height = this.photo.clientHeight;
    this.redrawOverlay();
  }

  private clearCanvas(): void {
    const ctx = this.canvas.getContext("2d");
    ctx?.clearRect(0, 0, this.canvas.width, this.canvas.height);
  }

  private redrawOverlay(): void {
    const answer = this.state.lastLocation;
    const info = this.state.selected;
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    if (!answer || !info || this.overlayImageId !== info.id) {
      ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
      return;
    }
    const factor = scaleFactor(this.photo.clientWidth, info.width);
    const rects = overlayRects(answer, this.state.hiddenClasses, factor);
    drawOverlay(ctx, rects, this.canvas.width, this.canvas.height);
  }

  private renderToggles(answer: Answer): void {
    this.toggles.textContent = "";
    if (answer.task !== "location") return;
    for (const label of answer.entities) {
      const chip = document.createElement("button");
      chip.type = "button";
      chip.className = "chip";
      chip.style.borderColor = colorFor(label);
      chip.textContent = label;
      chip.addEventListener("click", () => {
        if (!this.state.toggle(label)) return;
        chip.classList.toggle("off", this.state.isHidden(label));
        this.redrawOverlay();
      });
      this.toggles.appendChild(chip);
    }
  }

  private async submit(): Promise<void> {
    if (this.pending) return;
    const question = this.questionInput.value.trim();
    const selected = this.state.selected;
    if (!question) return;
    if (!selected) {
      this.showError("select an image first");
      return;
    }
    this.pending = true;
    this.askButton.disabled = true;
    this.showError(null);
    try {
      const resp = await this.api.query(selected.id, question);
      const entry = this.state.append(question, resp.answer);
      if (resp.answer.task === "location") {
        this.overlayImageId = selected.id;
        this.renderToggles(resp.answer);
        this.redrawOverlay();
      }
      this.renderHistoryEntry(entry);
      this.questionInput.value = "";
    } catch (err) {
      if (err instanceof QueryRejectedError) {
        this.showError(`${err.rejection.code}: ${err.rejection.message}`);
      } else {
        this.showError(describe(err));
      }
    } finally {
      this.pending = false;
      this.askButton.disabled = false;
    }
  }

  private renderHistoryEntry(entry: HistoryEntry): void {
    const item = document.createElement("li");
    const details = document.createElement("details");
    const summary = document.createElement("summary");
    const tag = document.createElement("span");
    tag.className = `task task-${entry.answer.task}`;
    tag.textContent = entry.answer.task;
    summary.appendChild(tag);
    summary.appendChild(document.createTextNode(` ${entry.question}`));
    details.appendChild(summary);

    const results = document.createElement("div");
    results.className = "results";
    for (const chipText of resultChips(entry.answer)) {
      const chip = document.createElement("span");
      chip.className = "chip";
      chip.textContent = chipText;
      results.appendChild(chip);
    }
    details.appendChild(results);

    const trace = document.createElement("pre");
    trace.className = "trace";
    trace.textContent = entry.answer.trace
      .map((s) => `${s.goal}  =>  ${s.outcome}${s.clause ? `  [${s.clause}]` : ""}`)
      .join("\n");
    details.appendChild(trace);

    item.appendChild(details);
    this.historyList.prepend(item);
  }

  private showError(message: string | null): void {
    this.errorBox.textContent = message ?? "";
    this.errorBox.hidden = message === null;
  }
}

function describeClasses(info: ImageInfo): string {
  const parts = Object.entries(info.classes)
    .sort(([a], [b]) => a.localeCompare(b))
    .map(([label, n]) => `${label} ${n}`);
  return parts.join(", ") || "empty";
}

/** One short chip per class; the values come straight from the answer. */
export function resultChips(answer: Answer): string[] {
  switch (answer.task) {
    case "counting":
      return answer.entities.map((e) => `${e}: ${answer.results[e] ?? 0}`);
    case "existence":
      return answer.entities.map((e) => `${e}: ${answer.results[e] ? "yes" : "no"}`);
    case "location":
      return answer.entities.map((e) => `${e}: ${(answer.results[e] ?? []).length} box(es)`);
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return `HTTP ${err.status}: ${err.message}`;
  return err instanceof Error ? err.message : String(err);
}
