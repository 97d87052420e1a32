#!/usr/bin/env python3
"""Regenerates the built-in question corpus (60 questions, 20 per task).

Expected task and entities are fixed by the template structure, never by
running the classifier, so the corpus stays a genuine check on the
parser. Writes src/zoologic/data/questions.jsonl.
"""
from __future__ import annotations

import json
import pathlib

from zoologic.language import DEFAULT_CLASSES, pluralize

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "zoologic" / "data" / "questions.jsonl"

COUNT_PAIRS = [("zebra", "buffalo"), ("tiger", "lion"), ("elephant", "rhino")]
NEAR_PAIRS = [("polar_bear", "brown_bear"), ("cheetah", "leopard"), ("duck", "crocodile")]
WHERE_PAIRS = [("zebra", "cow"), ("lion", "buffalo"), ("camel", "elephant")]


def surface(label: str) -> str:
    return label.replace("_", " ")


def article(word: str) -> str:
    return "an" if word[0] in "aeiou" else "a"


def main() -> None:
    classes = list(DEFAULT_CLASSES)
    rows = []

    for c in classes:  # 17
        rows.append(("counting", f"How many {pluralize(surface(c))} are there?", [c]))
    for a, b in COUNT_PAIRS:  # 3
        rows.append(("counting", f"Count {surface(a)} and {surface(b)}", [a, b]))

    for c in classes:  # 17
        s = surface(c)
        rows.append(("existence", f"Is there {article(s)} {s} in the image?", [c]))
    for a, b in NEAR_PAIRS:  # 3
        sa, sb = surface(a), surface(b)
        rows.append(("existence", f"Is there {article(sa)} {sa} near the {sb}?", [a, b]))

    for c in classes[:10]:  # 10
        rows.append(("location", f"Where is the {surface(c)}?", [c]))
    for c in classes[10:]:  # 7
        rows.append(("location", f"Locate {pluralize(surface(c))} in the image", [c]))
    for a, b in WHERE_PAIRS:  # 3
        rows.append(
            (
                "location",
                f"Where are {pluralize(surface(a))} and {pluralize(surface(b))} in the image?",
                [a, b],
            )
        )

    per_task = {}
    for task, _, _ in rows:
        per_task[task] = per_task.get(task, 0) + 1
    assert per_task == {"counting": 20, "existence": 20, "location": 20}, per_task

    with OUT.open("w", encoding="utf-8") as fh:
        for task, question, entities in rows:
            fh.write(
                json.dumps(
                    {"question": question, "task": task, "entities": entities},
                    sort_keys=True,
                )
                + "\n"
            )
    print(f"wrote {len(rows)} questions to {OUT}")


if __name__ == "__main__":
    main()
