import { describe, expect, it } from "vitest";
import {
  type DrawContext,
  type OverlayRect,
  drawOverlay,
  overlayRects,
  scaleBox,
  scaleFactor,
} from "../src/overlay.js";
import { colorFor } from "../src/palette.js";
import type { Box, LocationAnswer } from "../src/types.js";

// Known boxes on a 1280x720 scene: three zebras, one buffalo.
const ZEBRA_BOXES: Box[] = [
  [112, 214, 298, 468],
  [352, 198, 540, 445],
  [610, 230, 804, 490],
];
const BUFFALO_BOXES: Box[] = [[880, 260, 1150, 560]];

function locationAnswer(): LocationAnswer {
  return {
    task: "location",
    entities: ["zebra", "buffalo"],
    results: { zebra: ZEBRA_BOXES, buffalo: BUFFALO_BOXES },
    trace: [],
  };
}

function corners(rect: OverlayRect): [number, number, number, number] {
  return [rect.x, rect.y, rect.x + rect.width, rect.y + rect.height];
}

describe("scaleFactor", () => {
  it("is display width over image width", () => {
    expect(scaleFactor(640, 1280)).toBe(0.5);
    expect(scaleFactor(1280, 1280)).toBe(1);
  });

  it("rejects a degenerate image width", () => {
    expect(() => scaleFactor(640, 0)).toThrow(RangeError);
  });
});

describe("overlay fidelity", () => {
  it("keeps every rendered corner within 1 px of the scaled box", () => {
    // 417/1280 is deliberately awkward; exactness must not rely on halving
    for (const display of [640, 417, 1280, 1903]) {
      const factor = scaleFactor(display, 1280);
      const rects = overlayRects(locationAnswer(), new Set(), factor);
      const expected = [...ZEBRA_BOXES, ...BUFFALO_BOXES];
      expect(rects).toHaveLength(expected.length);
      rects.forEach((rect, i) => {
        const box = expected[i] as Box;
        const [x1, y1, x2, y2] = corners(rect);
        expect(Math.abs(x1 - box[0] * factor)).toBeLessThanOrEqual(1);
        expect(Math.abs(y1 - box[1] * factor)).toBeLessThanOrEqual(1);
        expect(Math.abs(x2 - box[2] * factor)).toBeLessThanOrEqual(1);
        expect(Math.abs(y2 - box[3] * factor)).toBeLessThanOrEqual(1);
      });
    }
  });

  it("passes the projected numbers to the canvas verbatim", () => {
    const calls: Array<[number, number, number, number]> = [];
    let cleared = 0;
    const ctx: DrawContext = {
      strokeStyle: "",
      fillStyle: "",
      lineWidth: 0,
      font: "",
      clearRect: () => {
        cleared += 1;
      },
      strokeRect: (x, y, w, h) => calls.push([x, y, w, h]),
      fillText: () => {},
    };
    const factor = scaleFactor(640, 1280);
    const rects = overlayRects(locationAnswer(), new Set(), factor);
    drawOverlay(ctx, rects, 640, 360);
    expect(cleared).toBe(1);
    expect(calls).toEqual(rects.map((r) => [r.x, r.y, r.width, r.height]));
  });

  it("labels boxes 1-based per class with the class color", () => {
    const rects = overlayRects(locationAnswer(), new Set(), 1);
    expect(rects.map((r) => `${r.label} ${r.index}`)).toEqual([
      "zebra 1",
      "zebra 2",
      "zebra 3",
      "buffalo 1",
    ]);
    for (const rect of rects) {
      expect(rect.color).toBe(colorFor(rect.label));
    }
  });

  it("scaleBox maps xyxy to xywh at the given factor", () => {
    expect(scaleBox([10, 20, 110, 220], 0.5)).toEqual({
      x: 5,
      y: 10,
      width: 50,
      height: 100,
    });
  });
});

describe("class toggling", () => {
  it("removes exactly the toggled class's rectangles", () => {
    const factor = scaleFactor(640, 1280);
    const all = overlayRects(locationAnswer(), new Set(), factor);
    const withoutZebra = overlayRects(locationAnswer(), new Set(["zebra"]), factor);

    const removed = all.filter(
      (r) => !withoutZebra.some((k) => k.label === r.label && k.index === r.index),
    );
    expect(removed.map((r) => r.label)).toEqual(["zebra", "zebra", "zebra"]);
    expect(withoutZebra).toEqual(all.filter((r) => r.label !== "zebra"));
  });

  it("hiding every class leaves nothing", () => {
    const rects = overlayRects(locationAnswer(), new Set(["zebra", "buffalo"]), 1);
    expect(rects).toEqual([]);
  });

  it("hiding an absent label changes nothing", () => {
    const all = overlayRects(locationAnswer(), new Set(), 1);
    const same = overlayRects(locationAnswer(), new Set(["lion"]), 1);
    expect(same).toEqual(all);
  });

  it("a class with an empty box list draws no rectangles", () => {
    const answer: LocationAnswer = {
      task: "location",
      entities: ["lion"],
      results: { lion: [] },
      trace: [],
    };
    expect(overlayRects(answer, new Set(), 1)).toEqual([]);
  });
});
