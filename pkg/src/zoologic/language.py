"""Natural-language side: entity extraction and task classification.

Questions are matched against a surface-form lexicon (longest match
first) to pull out animal classes, and routed to one of three tasks by
cosine similarity between a hashed bag-of-ngrams embedding of the
question and per-task prototype vectors built from short paraphrase
phrases. Everything is deterministic: the only hash involved is FNV-1a.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .hashing import fnv1a64_text
from .logic.terms import ATOM_NAME

EMBED_DIM = 1024
DEFAULT_TAU = 0.05

TASK_LABELS = ("counting", "existence", "location")

_WORD = re.compile(r"\w+", re.UNICODE)


class LanguageError(Exception):
    """Base class for question-side errors."""


class UnclassifiableQuery(LanguageError):
    """No task prototype was similar enough to route the question."""

    def __init__(self, question: str, best_score: float):
        super().__init__(
            f"cannot route question {question!r}: best similarity {best_score:.4f} "
            "is below the acceptance threshold"
        )
        self.question = question
        self.best_score = best_score


def tokenize(text: str) -> List[str]:
    """Lowercased word tokens on Unicode word boundaries."""
    return _WORD.findall(text.lower())


# ---------------------------------------------------------------------------
# lexicon and entity extraction

# The animal classes the default lexicon knows about.
DEFAULT_CLASSES = (
    "bear",
    "brown_bear",
    "buffalo",
    "butterfly",
    "camel",
    "cheetah",
    "cow",
    "crocodile",
    "dog",
    "duck",
    "elephant",
    "leopard",
    "lion",
    "polar_bear",
    "rhino",
    "tiger",
    "zebra",
)

# Words whose plural is not produced by the regular +s/+es/ies rules.
IRREGULAR_PLURALS: Dict[str, Tuple[str, ...]] = {
    "buffalo": ("buffaloes", "buffalos"),
    "wolf": ("wolves",),
    "ox": ("oxen",),
    "mouse": ("mice",),
    "goose": ("geese",),
}

# Extra surface forms that do not derive from a class name.
DEFAULT_SYNONYMS: Dict[str, str] = {
    "rhinoceros": "rhino",
    "rhinoceroses": "rhino",
    "rhinos": "rhino",
}

_VOWELS = "aeiou"


def pluralize(phrase: str) -> str:
    """Regular English plural of the last word of a phrase."""
    head, _, word = phrase.rpartition(" ")
    if word in IRREGULAR_PLURALS:
        plural = IRREGULAR_PLURALS[word][0]
    elif word.endswith("y") and len(word) > 1 and word[-2] not in _VOWELS:
        plural = word[:-1] + "ies"
    elif word.endswith(("s", "x", "z", "ch", "sh")):
        plural = word + "es"
    else:
        plural = word + "s"
    return f"{head} {plural}".strip()


@dataclass(frozen=True)
class Lexicon:
    """Surface form -> canonical class label.

    Keys are matched on token sequences, so "polar bear", "polar-bear"
    and "polar_bear" need separate entries only when they tokenize
    differently.
    """

    entries: Mapping[str, str]
    _index: dict = field(init=False, repr=False, compare=False)
    _max_key: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        index: Dict[Tuple[str, ...], str] = {}
        for surface, label in self.entries.items():
            tokens = tuple(tokenize(surface))
            if not tokens:
                raise ValueError(f"lexicon surface form {surface!r} has no tokens")
            if not ATOM_NAME.match(label):
                raise ValueError(f"lexicon label {label!r} is not a legal constant")
            index[tokens] = label
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_max_key", max((len(k) for k in index), default=0))

    def labels(self) -> List[str]:
        """Canonical class labels, sorted."""
        return sorted(set(self.entries.values()))

    def match(self, tokens: Tuple[str, ...]) -> Optional[str]:
        return self._index.get(tokens)

    @property
    def max_key_tokens(self) -> int:
        return self._max_key


def default_lexicon() -> Lexicon:
    entries: Dict[str, str] = {}
    for label in DEFAULT_CLASSES:
        surface = label.replace("_", " ")
        entries[surface] = label
        entries[pluralize(surface)] = label
        if surface != label:
            entries[label] = label
        extras = IRREGULAR_PLURALS.get(surface.rsplit(" ", 1)[-1], ())
        for extra in extras[1:]:
            entries[f"{surface.rsplit(' ', 1)[0]} {extra}".strip()] = label
    entries.update(DEFAULT_SYNONYMS)
    return Lexicon(entries)


def load_lexicon(path: str) -> Lexicon:
    """Lexicon file: one ``surface form => label`` per line. Blank lines
    and ``#`` comments are skipped."""
    entries: Dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=>" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'surface => label'")
            surface, _, label = line.partition("=>")
            entries[surface.strip().lower()] = label.strip()
    return Lexicon(entries)


def extract_entities(question: str, lexicon: Optional[Lexicon] = None) -> List[str]:
    """Animal classes mentioned in a question, first mention first.

    Matching is greedy: at each token the longest lexicon key wins, so
    "polar bear" never decays into a bare "bear" hit. Duplicate mentions
    collapse onto the first occurrence. An empty result is legitimate;
    the reasoner decides whether to treat it as an error.
    """
    if lexicon is None:
        lexicon = default_lexicon()
    tokens = tokenize(question)
    found: List[str] = []
    seen = set()
    i = 0
    n = len(tokens)
    while i < n:
        matched = False
        for length in range(min(lexicon.max_key_tokens, n - i), 0, -1):
            label = lexicon.match(tuple(tokens[i : i + length]))
            if label is not None:
                if label not in seen:
                    seen.add(label)
                    found.append(label)
                i += length
                matched = True
                break
        if not matched:
            i += 1
    return found


# ---------------------------------------------------------------------------
# hashed embedding

Vector = List[float]


def embed(text: str, dim: int = EMBED_DIM) -> Vector:
    """Signed feature hashing of token unigrams and bigrams.

    Each feature is hashed with 64-bit FNV-1a; the low bit picks the
    sign, the remaining bits pick the bucket. The result is L2
    normalized, except that an empty token stream embeds to the zero
    vector.
    """
    if dim <= 0:
        raise ValueError("embedding dimension must be positive")
    tokens = tokenize(text)
    vec = [0.0] * dim
    features: List[str] = list(tokens)
    features.extend(f"{a} {b}" for a, b in zip(tokens, tokens[1:]))
    for feat in features:
        h = fnv1a64_text(feat)
        sign = 1.0 if (h & 1) == 0 else -1.0
        vec[(h >> 1) % dim] += sign
    norm = math.sqrt(sum(v * v for v in vec))
    if norm == 0.0:
        return vec
    return [v / norm for v in vec]


def cosine(a: Sequence[float], b: Sequence[float]) -> float:
    """Cosine similarity; zero vectors are orthogonal to everything."""
    if len(a) != len(b):
        raise ValueError("dimension mismatch")
    dot = 0.0
    na = 0.0
    nb = 0.0
    for x, y in zip(a, b):
        dot += x * y
        na += x * x
        nb += y * y
    if na == 0.0 or nb == 0.0:
        return 0.0
    return dot / math.sqrt(na * nb)


# ---------------------------------------------------------------------------
# task prototypes and classification

# Short marker phrases per task. Chosen so that each task's fixture
# questions land clearly on their own prototype and everything else
# stays near zero; in particular no phrase contains bare "is" or "the",
# which would drag arbitrary English toward a task.
DEFAULT_PARAPHRASES: Dict[str, Tuple[str, ...]] = {
    "counting": ("how many", "how many are there", "count", "number of", "total"),
    "existence": ("are there any", "there a", "there an", "does it contain", "presence of"),
    "location": ("where", "where are", "locate", "find", "position of", "which part"),
}


def load_paraphrases(path: str) -> Dict[str, Tuple[str, ...]]:
    """Paraphrase file: ``label: phrase; phrase; ...`` per line."""
    out: Dict[str, Tuple[str, ...]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if ":" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'label: phrase; ...'")
            label, _, rest = line.partition(":")
            phrases = tuple(p.strip() for p in rest.split(";") if p.strip())
            if not phrases:
                raise ValueError(f"{path}:{lineno}: no phrases for {label.strip()!r}")
            out[label.strip()] = phrases
    return out


def build_prototypes(
    paraphrases: Optional[Mapping[str, Sequence[str]]] = None, dim: int = EMBED_DIM
) -> Dict[str, Vector]:
    """Mean of paraphrase embeddings per task label, renormalized."""
    if paraphrases is None:
        paraphrases = DEFAULT_PARAPHRASES
    missing = [label for label in TASK_LABELS if label not in paraphrases]
    if missing:
        raise ValueError(f"paraphrases missing task labels: {missing}")
    prototypes: Dict[str, Vector] = {}
    for label in TASK_LABELS:
        phrases = list(paraphrases[label])
        if not phrases:
            raise ValueError(f"no paraphrases for task {label!r}")
        acc = [0.0] * dim
        for phrase in phrases:
            for i, v in enumerate(embed(phrase, dim)):
                acc[i] += v
        norm = math.sqrt(sum(v * v for v in acc))
        if norm == 0.0:
            raise ValueError(f"prototype for task {label!r} is the zero vector")
        prototypes[label] = [v / norm for v in acc]
    return prototypes


@dataclass(frozen=True)
class TaskFlags:
    """One boolean per task plus the raw similarity scores. The parser
    always produces exactly one raised flag."""

    flags: Mapping[str, bool]
    scores: Mapping[str, float]

    def active(self) -> List[str]:
        return [label for label, on in self.flags.items() if on]


@dataclass(frozen=True)
class ParsedQuery:
    raw: str
    entities: Tuple[str, ...]
    task: TaskFlags


def pick_task(qvec: Sequence[float], prototypes: Mapping[str, Vector]) -> Tuple[str, Dict[str, float]]:
    """Best-scoring label, ties broken lexicographically."""
    scores = {label: cosine(qvec, vec) for label, vec in prototypes.items()}
    best: Optional[str] = None
    for label in sorted(scores):
        if best is None or scores[label] > scores[best]:
            best = label
    assert best is not None
    return best, scores


def classify_task(
    question: str,
    prototypes: Optional[Mapping[str, Vector]] = None,
    tau: float = DEFAULT_TAU,
) -> TaskFlags:
    """Route a question to exactly one task.

    Raises UnclassifiableQuery when even the best prototype scores below
    ``tau``; an empty question embeds to zero and is always rejected.
    """
    if prototypes is None:
        prototypes = build_prototypes()
    best, scores = pick_task(embed(question, len(next(iter(prototypes.values())))), prototypes)
    if scores[best] < tau:
        raise UnclassifiableQuery(question, scores[best])
    return TaskFlags(
        flags={label: label == best for label in prototypes},
        scores=scores,
    )


def parse(
    question: str,
    lexicon: Optional[Lexicon] = None,
    prototypes: Optional[Mapping[str, Vector]] = None,
    tau: float = DEFAULT_TAU,
) -> ParsedQuery:
    """Full question analysis: task flags plus extracted entities."""
    task = classify_task(question, prototypes, tau)
    entities = extract_entities(question, lexicon)
    return ParsedQuery(raw=question, entities=tuple(entities), task=task)


def builtin_question_corpus() -> List[Dict[str, object]]:
    """The shipped 60-question fixture corpus (question, task, entities)."""
    import json
    from importlib import resources

    text = resources.files("zoologic.data").joinpath("questions.jsonl").read_text("utf-8")
    return [json.loads(line) for line in text.splitlines() if line.strip()]
