#!/usr/bin/env python3
"""Regenerate fixtures/eval.jsonl from the detection fixtures.

Expected answers are computed by direct list arithmetic over the raw
detection records, deliberately bypassing the library pipeline, so the
eval harness checks the pipeline against an independent source.
"""
import json
import os
import sys

FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "fixtures")

PLURALS = {
    "zebra": "zebras",
    "buffalo": "buffaloes",
    "tiger": "tigers",
    "crocodile": "crocodiles",
    "cow": "cows",
    "lion": "lions",
    "elephant": "elephants",
}


def article(word: str) -> str:
    return "an" if word[0] in "aeiou" else "a"


def main() -> int:
    with open(os.path.join(FIXTURES, "detections.json"), "r", encoding="utf-8") as fh:
        dataset = json.load(fh)
    lines = []
    for record in dataset["images"]:
        image_id = record["id"]
        counts = {}
        boxes = {}
        for det in record["detections"]:
            counts[det["class"]] = counts.get(det["class"], 0) + 1
            boxes.setdefault(det["class"], []).append(det["bbox"])
        present = sorted(counts)
        absent = [c for c in ("lion", "elephant") if c not in counts]
        for label in present + absent:
            plural = PLURALS[label]
            lines.append(
                {
                    "image_id": image_id,
                    "question": f"How many {plural} are there?",
                    "expected": {"task": "counting", "results": {label: counts.get(label, 0)}},
                }
            )
            lines.append(
                {
                    "image_id": image_id,
                    "question": f"Is there {article(label)} {label} in the image?",
                    "expected": {
                        "task": "existence",
                        "results": {label: label in counts},
                    },
                }
            )
            lines.append(
                {
                    "image_id": image_id,
                    "question": f"Locate {plural} in the image",
                    "expected": {"task": "location", "results": {label: boxes.get(label, [])}},
                }
            )
    out_path = os.path.join(FIXTURES, "eval.jsonl")
    with open(out_path, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(json.dumps(line, sort_keys=True) + "\n")
    print(f"wrote {len(lines)} fixtures to {out_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
