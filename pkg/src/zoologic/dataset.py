"""Whole-dataset loading and the immutable store behind the CLI and service.

A dataset is a detection file (JSON batch or a directory of YOLO text
files), an optional image directory, and optional overrides for rules,
lexicon, paraphrases, and thresholds, all named by a small key=value
config file. Loading grounds every image once up front; the resulting
store is never mutated, so request handlers can share it freely.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .grounding import (
    DEFAULT_THRESHOLD,
    DetectionSet,
    FormatError,
    ImageMeta,
    SymbolicKB,
    _load_json_record,
    default_rules,
    ground,
    load_detections,
    load_names,
    load_rules,
)
from .language import (
    DEFAULT_TAU,
    Lexicon,
    ParsedQuery,
    Vector,
    build_prototypes,
    default_lexicon,
    load_lexicon,
    load_paraphrases,
    parse,
)
from .logic import Program

IMAGE_EXTENSIONS = (".png", ".jpg", ".jpeg", ".bmp", ".gif", ".webp")


class DatasetError(Exception):
    """Base class for dataset assembly problems."""


class DuplicateImageId(DatasetError):
    """Two records claim the same image id."""


class ConfigError(DatasetError):
    """The serve config file is malformed or incomplete."""


def _resolve_path(path: Optional[str], base_dir: Optional[str]) -> Optional[str]:
    if path is None or base_dir is None or os.path.isabs(path):
        return path
    return os.path.join(base_dir, path)


def load_dataset_json(
    source, threshold: float = DEFAULT_THRESHOLD, images_dir: Optional[str] = None
) -> List[DetectionSet]:
    """Parse a batch detection file: {"images": [record, ...]}.

    Relative image paths in records are resolved against images_dir so a
    dataset directory can be moved as a unit.
    """
    if isinstance(source, (str, bytes)):
        try:
            payload = json.loads(source)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc}") from None
    elif isinstance(source, dict):
        payload = source
    else:
        payload = json.load(source)
    if not isinstance(payload, dict) or not isinstance(payload.get("images"), list):
        raise FormatError("dataset must be an object with an 'images' list")
    sets: List[DetectionSet] = []
    seen = set()
    for record in payload["images"]:
        dset = _load_json_record(record, None, threshold)
        if dset.image.id in seen:
            raise DuplicateImageId(f"image id {dset.image.id!r} appears twice")
        seen.add(dset.image.id)
        if dset.image.path is not None and images_dir is not None:
            resolved = _resolve_path(dset.image.path, images_dir)
            if resolved != dset.image.path:
                meta = ImageMeta(
                    id=dset.image.id,
                    width=dset.image.width,
                    height=dset.image.height,
                    path=resolved,
                )
                dset = DetectionSet(meta, dset.detections)
        sets.append(dset)
    return sets


def _find_image_file(images_dir: str, stem: str) -> Optional[str]:
    for ext in IMAGE_EXTENSIONS:
        candidate = os.path.join(images_dir, stem + ext)
        if os.path.exists(candidate):
            return candidate
    return None


def load_dataset_yolo(
    labels_dir: str,
    images_dir: str,
    names: Sequence[str],
    threshold: float = DEFAULT_THRESHOLD,
) -> List[DetectionSet]:
    """One DetectionSet per .txt file; ids are file stems.

    Box math needs pixel dimensions, which YOLO files do not carry, so
    every label file must have a sibling image readable by Pillow.
    """
    from PIL import Image

    try:
        entries = sorted(os.listdir(labels_dir))
    except OSError as exc:
        raise FormatError(f"cannot list label dir: {exc}") from None
    sets: List[DetectionSet] = []
    for entry in entries:
        if not entry.endswith(".txt"):
            continue
        stem = entry[: -len(".txt")]
        image_path = _find_image_file(images_dir, stem)
        if image_path is None:
            raise FormatError(f"no image found for label file {entry!r} in {images_dir!r}")
        with Image.open(image_path) as img:
            width, height = img.size
        meta = ImageMeta(id=stem, width=width, height=height, path=image_path)
        with open(os.path.join(labels_dir, entry), "r", encoding="utf-8") as fh:
            sets.append(
                load_detections(fh, format="yolo", meta=meta, names=names, threshold=threshold)
            )
    return sets


@dataclass(frozen=True)
class DatasetStore:
    """Everything a query needs, grounded once and shared read-only."""

    images: Mapping[str, SymbolicKB]
    lexicon: Lexicon
    prototypes: Mapping[str, Vector]
    tau: float = DEFAULT_TAU

    def ids(self) -> List[str]:
        return sorted(self.images)

    def get(self, image_id: str) -> Optional[SymbolicKB]:
        return self.images.get(image_id)

    @property
    def vocabulary(self) -> Tuple[str, ...]:
        return tuple(self.lexicon.labels())

    def parse_question(self, question: str) -> ParsedQuery:
        return parse(question, self.lexicon, self.prototypes, self.tau)


def build_store(
    dsets: Sequence[DetectionSet],
    rules: Optional[Program] = None,
    lexicon: Optional[Lexicon] = None,
    paraphrases=None,
    tau: float = DEFAULT_TAU,
) -> DatasetStore:
    if rules is None:
        rules = default_rules()
    images: Dict[str, SymbolicKB] = {}
    for dset in dsets:
        if dset.image.id in images:
            raise DuplicateImageId(f"image id {dset.image.id!r} appears twice")
        images[dset.image.id] = ground(dset, rules)
    return DatasetStore(
        images=images,
        lexicon=lexicon if lexicon is not None else default_lexicon(),
        prototypes=build_prototypes(paraphrases),
        tau=tau,
    )


CONFIG_KEYS = (
    "detections",
    "format",
    "images_dir",
    "names",
    "rules",
    "lexicon",
    "paraphrases",
    "threshold",
    "tau",
    "host",
    "port",
)


@dataclass(frozen=True)
class ServeConfig:
    """Parsed key=value config; all paths already absolute or base-relative."""

    detections: str
    format: str = "json"
    images_dir: Optional[str] = None
    names: Optional[str] = None
    rules: Optional[str] = None
    lexicon: Optional[str] = None
    paraphrases: Optional[str] = None
    threshold: float = DEFAULT_THRESHOLD
    tau: float = DEFAULT_TAU
    host: str = "127.0.0.1"
    port: int = 8000


def parse_config(text: str, base_dir: Optional[str] = None) -> ServeConfig:
    """key=value lines, # comments; relative paths resolve against the
    config file's own directory."""
    values: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        values[key] = value
    if "detections" not in values:
        raise ConfigError("config must set 'detections'")
    fmt = values.get("format", "json")
    if fmt not in ("json", "yolo"):
        raise ConfigError(f"format must be json or yolo, got {fmt!r}")
    try:
        threshold = float(values.get("threshold", DEFAULT_THRESHOLD))
        tau = float(values.get("tau", DEFAULT_TAU))
        port = int(values.get("port", 8000))
    except ValueError as exc:
        raise ConfigError(f"bad numeric value: {exc}") from None
    return ServeConfig(
        detections=_resolve_path(values["detections"], base_dir),
        format=fmt,
        images_dir=_resolve_path(values.get("images_dir"), base_dir),
        names=_resolve_path(values.get("names"), base_dir),
        rules=_resolve_path(values.get("rules"), base_dir),
        lexicon=_resolve_path(values.get("lexicon"), base_dir),
        paraphrases=_resolve_path(values.get("paraphrases"), base_dir),
        threshold=threshold,
        tau=tau,
        host=values.get("host", "127.0.0.1"),
        port=port,
    )


def load_config(path: str) -> ServeConfig:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_config(text, base_dir=os.path.dirname(os.path.abspath(path)))


def load_store(config: ServeConfig) -> DatasetStore:
    """Read every file the config names and ground the whole dataset."""
    if config.format == "yolo":
        if config.names is None or config.images_dir is None:
            raise ConfigError("yolo datasets need both 'names' and 'images_dir'")
        dsets = load_dataset_yolo(
            config.detections, config.images_dir, load_names(config.names), config.threshold
        )
    else:
        with open(config.detections, "r", encoding="utf-8") as fh:
            dsets = load_dataset_json(fh, config.threshold, config.images_dir)
    return build_store(
        dsets,
        rules=load_rules(config.rules) if config.rules else None,
        lexicon=load_lexicon(config.lexicon) if config.lexicon else None,
        paraphrases=load_paraphrases(config.paraphrases) if config.paraphrases else None,
        tau=config.tau,
    )
