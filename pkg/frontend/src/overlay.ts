/**
 * Projects a location answer onto display coordinates and draws it.
 *
 * All geometry lives in pure functions so fidelity is testable without a
 * browser: one scale factor (display width / image width), applied to every
 * corner. Drawing passes the projected numbers to the canvas verbatim.
 */

import type { Box, LocationAnswer } from "./types.js";
import { colorFor } from "./palette.js";

export interface OverlayRect {
  label: string;
  /** 1-based index within the label's box list. */
  index: number;
  color: string;
  x: number;
  y: number;
  width: number;
  height: number;
}

// Mirrors the server's SVG text placement rule.
const LABEL_RAISE = 4;
const LABEL_MIN_Y = 10;

export function scaleFactor(displayWidth: number, imageWidth: number): number {
  if (imageWidth <= 0) throw new RangeError(`image width ${imageWidth}`);
  return displayWidth / imageWidth;
}

export interface ScaledBox {
  x: number;
  y: number;
  width: number;
  height: number;
}

export function scaleBox(box: Box, factor: number): ScaledBox {
  const [x1, y1, x2, y2] = box;
  return {
    x: x1 * factor,
    y: y1 * factor,
    width: (x2 - x1) * factor,
    height: (y2 - y1) * factor,
  };
}

/**
 * Rectangles to draw: answer boxes minus hidden classes, scaled by `factor`.
 * Label order follows the answer's entity list, box order the answer's
 * box lists; nothing is reordered or recomputed.
 */
export function overlayRects(
  answer: LocationAnswer,
  hidden: ReadonlySet<string>,
  factor: number,
): OverlayRect[] {
  const rects: OverlayRect[] = [];
  for (const label of answer.entities) {
    if (hidden.has(label)) continue;
    const boxes = answer.results[label] ?? [];
    const color = colorFor(label);
    boxes.forEach((box, i) => {
      rects.push({ label, index: i + 1, color, ...scaleBox(box, factor) });
    });
  }
  return rects;
}

/** The subset of CanvasRenderingContext2D the renderer touches. */
export interface DrawContext {
  strokeStyle: string | CanvasGradient | CanvasPattern;
  fillStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  clearRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  fillText(text: string, x: number, y: number): void;
}

export function drawOverlay(
  ctx: DrawContext,
  rects: readonly OverlayRect[],
  width: number,
  height: number,
): void {
  ctx.clearRect(0, 0, width, height);
  ctx.lineWidth = 3;
  ctx.font = "13px system-ui, sans-serif";
  for (const rect of rects) {
    ctx.strokeStyle = rect.color;
    ctx.strokeRect(rect.x, rect.y, rect.width, rect.height);
    ctx.fillStyle = rect.color;
    const textY = Math.max(rect.y - LABEL_RAISE, LABEL_MIN_Y);
    ctx.fillText(`${rect.label} ${rect.index}`, rect.x, textY);
  }
}
