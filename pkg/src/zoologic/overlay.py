"""Renders location answers as SVG overlays.

Boxes are drawn at their answer coordinates with no rescaling; class
colors come from a fixed 12-color palette keyed by the 64-bit hash of
the label, so the same class is the same color in every document. The
source image is referenced by path when one is known, or inlined as a
data URI on request. Output is byte-stable for identical inputs.
"""
from __future__ import annotations

import base64
import mimetypes
from dataclasses import dataclass
from typing import List, Tuple
from xml.sax.saxutils import escape, quoteattr

from .grounding import ImageMeta
from .hashing import fnv1a64_text
from .reasoner import Answer

PALETTE = (
    "#e6194b",
    "#3cb44b",
    "#ffe119",
    "#4363d8",
    "#f58231",
    "#911eb4",
    "#46f0f0",
    "#f032e6",
    "#bcf60c",
    "#fabebe",
    "#008080",
    "#e6beff",
)

STROKE_WIDTH = 3
LABEL_FONT_SIZE = 16
# Labels sit just above their box but never above the canvas top.
LABEL_RAISE = 4
LABEL_MIN_Y = 10


class OverlayError(Exception):
    """Base class for overlay rendering errors."""


class MissingImagePath(OverlayError):
    """Embedding was requested but the image has no path on disk."""


def color_for(label: str) -> str:
    return PALETTE[fnv1a64_text(label) % len(PALETTE)]


@dataclass(frozen=True)
class OverlayBox:
    label: str
    box: Tuple[float, float, float, float]
    color: str
    index: int


@dataclass(frozen=True)
class OverlaySpec:
    image: ImageMeta
    boxes: Tuple[OverlayBox, ...]


def build_overlay_spec(image: ImageMeta, ans: Answer) -> OverlaySpec:
    """Flatten a location answer into drawable boxes.

    Classes keep the answer's order; indices are 1-based within each
    class so labels read "zebra 1", "zebra 2", ...
    """
    if ans.task != "location":
        raise ValueError(f"overlay needs a location answer, got {ans.task!r}")
    boxes: List[OverlayBox] = []
    for label, value in ans.per_class.items():
        color = color_for(label)
        for index, box in enumerate(value, start=1):
            boxes.append(OverlayBox(label=label, box=tuple(box), color=color, index=index))
    return OverlaySpec(image=image, boxes=tuple(boxes))


def _image_element(image: ImageMeta, embed_image: bool) -> List[str]:
    if embed_image:
        if image.path is None:
            raise MissingImagePath(f"image {image.id!r} has no path to embed")
        with open(image.path, "rb") as fh:
            raw = fh.read()
        mime = mimetypes.guess_type(image.path)[0] or "application/octet-stream"
        href = f"data:{mime};base64,{base64.b64encode(raw).decode('ascii')}"
    elif image.path is not None:
        href = image.path
    else:
        return []
    return [
        f"  <image href={quoteattr(href)} x=\"0\" y=\"0\" "
        f'width="{image.width}" height="{image.height}"/>'
    ]


def render_overlay(image: ImageMeta, ans: Answer, embed_image: bool = False) -> str:
    """Location answer to SVG text: one rect and one text label per box."""
    spec = build_overlay_spec(image, ans)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{image.width}" '
        f'height="{image.height}" viewBox="0 0 {image.width} {image.height}">'
    ]
    lines.extend(_image_element(image, embed_image))
    for entry in spec.boxes:
        x1, y1, x2, y2 = entry.box
        lines.append(
            f'  <rect x="{x1}" y="{y1}" width="{x2 - x1}" height="{y2 - y1}" '
            f'fill="none" stroke="{entry.color}" stroke-width="{STROKE_WIDTH}"/>'
        )
        text = escape(f"{entry.label} {entry.index}")
        label_y = max(y1 - LABEL_RAISE, LABEL_MIN_Y)
        lines.append(
            f'  <text x="{x1}" y="{label_y}" fill="{entry.color}" '
            f'font-size="{LABEL_FONT_SIZE}">{text}</text>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
