"""Turns detector output into a symbolic knowledge base.

Two detector formats are supported: a JSON schema carrying image
metadata inline, and YOLO text files (one line per box, normalized
center coordinates) that need the image size and a class-name list
supplied from outside. Grounding asserts one ``animal(class, count)``
fact per present class and one ``animal_bbox(class, x1, y1, x2, y2)``
fact per retained detection. Confidences gate retention but are never
asserted into the knowledge base.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, Mapping, Optional, Sequence, TextIO, Union

from .logic import Atom, Clause, Num, Program, Struct, extend, parse_program
from .logic.terms import ATOM_NAME

DEFAULT_THRESHOLD = 0.25

# Boxes may poke out of the image by up to this many pixels before the
# loader refuses them; anything inside the margin is snapped to the edge.
CLAMP_TOLERANCE = 2.0

_SEPARATORS = re.compile(r"[\s\-]+")


class GroundingError(Exception):
    """Base class for detector-input problems."""


class FormatError(GroundingError):
    """Structurally malformed detection record."""


class UnknownClassId(GroundingError):
    """A YOLO class id with no entry in the names list."""


class GeometryError(GroundingError):
    """A box that cannot be reconciled with the image bounds."""


def canonical_label(raw: str) -> str:
    """Normalize a class name to a symbolic constant.

    Lowercases, trims, and joins words with underscores, so "Polar Bear"
    and "polar-bear" both become ``polar_bear``. The result must be a
    legal constant (letter first), otherwise FormatError.
    """
    label = _SEPARATORS.sub("_", raw.strip().lower())
    if not ATOM_NAME.match(label):
        raise FormatError(f"class label {raw!r} does not normalize to a legal constant")
    return label


@dataclass(frozen=True)
class ImageMeta:
    """Identity and pixel size of one image; path is optional and only
    needed for serving bytes or embedding the bitmap in overlays."""

    id: str
    width: int
    height: int
    path: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("image id must be non-empty")
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"image {self.id}: dimensions must be positive")


@dataclass(frozen=True)
class Detection:
    """One detector hit: canonical class, confidence, absolute xyxy box."""

    class_label: str
    confidence: float
    bbox: tuple[float, float, float, float]


@dataclass(frozen=True)
class DetectionSet:
    """Detections retained for one image, in file order.

    Construction checks every box lies strictly inside the image:
    0 <= x1 < x2 <= width and 0 <= y1 < y2 <= height, and that
    confidences sit in [0, 1]. Loaders clamp near-miss boxes before
    building one of these.
    """

    image: ImageMeta
    detections: tuple[Detection, ...] = ()

    def __post_init__(self) -> None:
        for det in self.detections:
            x1, y1, x2, y2 = det.bbox
            if not (0.0 <= x1 < x2 <= self.image.width):
                raise GeometryError(
                    f"image {self.image.id}: box x-range [{x1}, {x2}] outside [0, {self.image.width}]"
                )
            if not (0.0 <= y1 < y2 <= self.image.height):
                raise GeometryError(
                    f"image {self.image.id}: box y-range [{y1}, {y2}] outside [0, {self.image.height}]"
                )
            if not (0.0 <= det.confidence <= 1.0):
                raise FormatError(
                    f"image {self.image.id}: confidence {det.confidence} outside [0, 1]"
                )


@dataclass(frozen=True)
class SymbolicKB:
    """A clause program for one image plus its per-class counts."""

    image: ImageMeta
    program: Program
    class_counts: Dict[str, int] = field(default_factory=dict)


def default_rules() -> Program:
    """The built-in rule set (existence from counts)."""
    text = resources.files("zoologic.data").joinpath("rules.pl").read_text("utf-8")
    return parse_program(text)


def load_rules(path: str) -> Program:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_program(fh.read())


def _clamp_box(
    bbox: tuple[float, float, float, float], image: ImageMeta, where: str
) -> tuple[float, float, float, float]:
    out = []
    for value, high in zip(bbox, (image.width, image.height, image.width, image.height)):
        if value < -CLAMP_TOLERANCE or value > high + CLAMP_TOLERANCE:
            raise GeometryError(
                f"{where}: coordinate {value} exceeds image bounds 0..{high} "
                f"beyond the {CLAMP_TOLERANCE}px tolerance"
            )
        out.append(min(max(value, 0.0), float(high)))
    x1, y1, x2, y2 = out
    if not (x1 < x2 and y1 < y2):
        raise GeometryError(f"{where}: degenerate box after clamping: {tuple(out)}")
    return (x1, y1, x2, y2)


def _as_float(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise FormatError(f"{where}: expected a number, found {value!r}")
    return float(value)


def _load_json_record(record: dict, meta: Optional[ImageMeta], threshold: float) -> DetectionSet:
    if not isinstance(record, dict):
        raise FormatError("detection record must be an object")
    if meta is None:
        try:
            meta = ImageMeta(
                id=str(record["id"]),
                width=int(record["width"]),
                height=int(record["height"]),
                path=record.get("path"),
            )
        except KeyError as exc:
            raise FormatError(f"image record missing field {exc.args[0]!r}") from None
        except (TypeError, ValueError) as exc:
            raise FormatError(f"bad image metadata: {exc}") from None
    raw = record.get("detections")
    if not isinstance(raw, list):
        raise FormatError(f"image {meta.id}: 'detections' must be a list")
    kept = []
    for idx, entry in enumerate(raw):
        where = f"image {meta.id}, detection {idx}"
        if not isinstance(entry, dict):
            raise FormatError(f"{where}: expected an object")
        try:
            label = canonical_label(str(entry["class"]))
            conf = _as_float(entry["confidence"], f"{where} confidence")
            bbox = entry["bbox"]
        except KeyError as exc:
            raise FormatError(f"{where}: missing field {exc.args[0]!r}") from None
        if not (0.0 <= conf <= 1.0):
            raise FormatError(f"{where}: confidence {conf} outside [0, 1]")
        if not isinstance(bbox, list) or len(bbox) != 4:
            raise FormatError(f"{where}: bbox must be a list of four numbers")
        coords = tuple(_as_float(v, f"{where} bbox") for v in bbox)
        if conf < threshold:
            continue
        kept.append(Detection(label, conf, _clamp_box(coords, meta, where)))
    return DetectionSet(meta, tuple(kept))


def _load_yolo_text(
    text: str,
    meta: ImageMeta,
    names: Union[Sequence[str], Mapping[int, str]],
    threshold: float,
) -> DetectionSet:
    if isinstance(names, Mapping):
        lookup = dict(names)
    else:
        lookup = {i: n for i, n in enumerate(names)}
    kept = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) not in (5, 6):
            raise FormatError(
                f"image {meta.id}, line {lineno}: expected 5 or 6 fields, found {len(fields)}"
            )
        try:
            class_id = int(fields[0])
        except ValueError:
            raise FormatError(
                f"image {meta.id}, line {lineno}: class id {fields[0]!r} is not an integer"
            ) from None
        try:
            cx, cy, w, h = (float(f) for f in fields[1:5])
            conf = float(fields[5]) if len(fields) == 6 else 1.0
        except ValueError:
            raise FormatError(
                f"image {meta.id}, line {lineno}: malformed numeric field"
            ) from None
        if class_id not in lookup:
            raise UnknownClassId(
                f"image {meta.id}, line {lineno}: class id {class_id} not in the names list"
            )
        if not (0.0 <= conf <= 1.0):
            raise FormatError(
                f"image {meta.id}, line {lineno}: confidence {conf} outside [0, 1]"
            )
        label = canonical_label(lookup[class_id])
        bbox = (
            (cx - w / 2.0) * meta.width,
            (cy - h / 2.0) * meta.height,
            (cx + w / 2.0) * meta.width,
            (cy + h / 2.0) * meta.height,
        )
        if conf < threshold:
            continue
        where = f"image {meta.id}, line {lineno}"
        kept.append(Detection(label, conf, _clamp_box(bbox, meta, where)))
    return DetectionSet(meta, tuple(kept))


def load_detections(
    source: Union[str, bytes, dict, TextIO],
    format: str = "json",
    meta: Optional[ImageMeta] = None,
    names: Optional[Union[Sequence[str], Mapping[int, str]]] = None,
    threshold: float = DEFAULT_THRESHOLD,
) -> DetectionSet:
    """Parse one image's detections and filter by confidence >= threshold.

    ``json`` sources may be a parsed record, raw text, or a stream; the
    record carries its own metadata unless ``meta`` is given. ``yolo_txt``
    sources are line-oriented text and require both ``meta`` (for pixel
    size) and ``names`` (class id -> label).
    """
    if format == "json":
        if hasattr(source, "read"):
            source = source.read()
        if isinstance(source, bytes):
            source = source.decode("utf-8")
        if isinstance(source, str):
            try:
                source = json.loads(source)
            except json.JSONDecodeError as exc:
                raise FormatError(f"invalid JSON: {exc}") from None
        if isinstance(source, dict) and "images" in source:
            images = source["images"]
            if not isinstance(images, list) or len(images) != 1:
                raise FormatError(
                    "expected exactly one image record; use load_dataset for batches"
                )
            source = images[0]
        return _load_json_record(source, meta, threshold)
    if format in ("yolo", "yolo_txt"):
        if meta is None:
            raise ValueError("yolo input needs image metadata for pixel dimensions")
        if names is None:
            raise ValueError("yolo input needs a class-name list")
        if hasattr(source, "read"):
            source = source.read()
        if isinstance(source, bytes):
            source = source.decode("utf-8")
        return _load_yolo_text(source, meta, names, threshold)
    raise ValueError(f"unknown detection format {format!r}")


def load_names(path: str) -> list[str]:
    """YOLO names file: one class label per line, index is the class id."""
    with open(path, "r", encoding="utf-8") as fh:
        return [line.strip() for line in fh if line.strip()]


def count_classes(dset: DetectionSet) -> Dict[str, int]:
    """Per-class detection counts, keyed in first-occurrence order.
    Classes without detections do not appear."""
    counts: Dict[str, int] = {}
    for det in dset.detections:
        counts[det.class_label] = counts.get(det.class_label, 0) + 1
    return counts


def ground(dset: DetectionSet, rules: Optional[Program] = None) -> SymbolicKB:
    """Build the knowledge base for one image.

    The program holds the rule clauses, then one count fact per class in
    first-occurrence order, then one box fact per detection in file
    order. Grounding the same detections twice gives identical programs.
    """
    if rules is None:
        rules = default_rules()
    counts = count_classes(dset)
    facts = [
        Clause(Struct("animal", (Atom(label), Num(n)))) for label, n in counts.items()
    ]
    for det in dset.detections:
        x1, y1, x2, y2 = det.bbox
        facts.append(
            Clause(
                Struct(
                    "animal_bbox",
                    (Atom(det.class_label), Num(x1), Num(y1), Num(x2), Num(y2)),
                )
            )
        )
    return SymbolicKB(dset.image, extend(rules, facts), counts)
