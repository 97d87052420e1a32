#!/usr/bin/env python3
"""Margin report for the task-routing prototypes.

Runs every fixture-style question template through the classifier and
prints the similarity of the winning task against the runner-up. Used
to pick the default paraphrase sets; rerun after touching them. Exits
nonzero if any question routes to the wrong task or any rejection case
clears the acceptance threshold.
"""
from __future__ import annotations

import sys

from zoologic.language import (
    DEFAULT_CLASSES,
    DEFAULT_TAU,
    build_prototypes,
    default_lexicon,
    embed,
    extract_entities,
    pick_task,
    pluralize,
)


def surface(label: str) -> str:
    return label.replace("_", " ")


def template_questions():
    classes = list(DEFAULT_CLASSES)
    plural = {c: pluralize(surface(c)) for c in classes}
    qs = []
    for c in classes:
        qs.append(("counting", f"How many {plural[c]} are there?"))
        qs.append(("existence", f"Is there a {surface(c)} in the image?"))
    pairs = list(zip(classes, classes[1:] + classes[:1]))
    for a, b in pairs[:6]:
        qs.append(("counting", f"Count {surface(a)} and {surface(b)}"))
        qs.append(("location", f"Where are {plural[a]} and {plural[b]} in the image?"))
        qs.append(("existence", f"Is there a {surface(a)} near the {surface(b)}?"))
    for c in classes:
        qs.append(("location", f"Where is the {surface(c)}?"))
        qs.append(("location", f"Locate {plural[c]} in the image"))
    # paper-style phrasings that must route correctly
    qs.extend(
        [
            ("counting", "How many tigers are there?"),
            ("counting", "Count zebra and buffalo"),
            ("counting", "How many dogs are in the scene?"),
            ("existence", "Is there a rhino in the image?"),
            ("location", "Where are zebras and cows in the image?"),
            ("location", "Locate zebras in the image"),
            ("location", "Where is the buffalo?"),
            ("location", "Where is the polar bear near the brown bear?"),
        ]
    )
    return qs


def main() -> int:
    prototypes = build_prototypes()
    failures = []
    worst = (2.0, None)
    print(f"{'expect':<10} {'got':<10} {'best':>7} {'margin':>7}  question")
    for expected, q in template_questions():
        best, scores = pick_task(embed(q), prototypes)
        ranked = sorted(scores.values(), reverse=True)
        margin = ranked[0] - ranked[1]
        status = "" if best == expected and ranked[0] >= DEFAULT_TAU else "  <-- WRONG"
        if status:
            failures.append(q)
        if margin < worst[0]:
            worst = (margin, q)
        print(f"{expected:<10} {best:<10} {ranked[0]:7.4f} {margin:7.4f}  {q}{status}")

    print("\nrejection cases (best score must stay below tau=%.2f):" % DEFAULT_TAU)
    for q in ("", "what is the weather", "what is the weather today", "hello hello"):
        best, scores = pick_task(embed(q), prototypes)
        top = max(scores.values())
        status = "" if top < DEFAULT_TAU else "  <-- NOT REJECTED"
        if status:
            failures.append(q or "<empty>")
        print(f"  best={best:<10} score={top:7.4f}  {q!r}{status}")

    print("\nentity extraction spot checks:")
    lex = default_lexicon()
    for q, want in [
        ("Where is the polar bear near the brown bear?", ["polar_bear", "brown_bear"]),
        ("Count zebra and buffalo", ["zebra", "buffalo"]),
        ("How many buffaloes are there?", ["buffalo"]),
        ("Is there a rhinoceros here?", ["rhino"]),
        ("are there butterflies", ["butterfly"]),
    ]:
        got = extract_entities(q, lex)
        status = "" if got == want else f"  <-- WRONG (want {want})"
        if status:
            failures.append(q)
        print(f"  {got!r:<30} {q}{status}")

    print(f"\nworst margin: {worst[0]:.4f} on {worst[1]!r}")
    if failures:
        print(f"\n{len(failures)} FAILURES")
        return 1
    print("\nall templates route correctly")
    return 0


if __name__ == "__main__":
    sys.exit(main())
