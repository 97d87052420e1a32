#!/usr/bin/env python3
"""Timing report for the hot paths: grounding, answering, batch ingest.

Run after engine or reasoner changes to see where the budget goes.
Numbers here are informational; the binding limits live in the
acceptance tests.
"""
import json
import random
import statistics
import sys
import time

from zoologic.dataset import DatasetStore, build_store, load_dataset_json
from zoologic.grounding import Detection, DetectionSet, ImageMeta, ground
from zoologic.language import DEFAULT_TAU, build_prototypes, default_lexicon
from zoologic.reasoner import answer

CLASSES = (
    "zebra", "buffalo", "tiger", "lion", "elephant",
    "rhino", "cow", "dog", "polar_bear", "crocodile",
)

QUESTIONS = {
    "counting": "How many zebras are there?",
    "existence": "Is there a dog in the image?",
    "location": "Locate tigers in the image",
}


def big_kb(n_boxes: int, rng: random.Random):
    dets = []
    for i in range(n_boxes):
        label = CLASSES[i % len(CLASSES)]
        x1 = rng.uniform(0, 1278)
        y1 = rng.uniform(0, 718)
        dets.append(
            Detection(label, 0.9, (x1, y1, rng.uniform(x1 + 1, 1280), rng.uniform(y1 + 1, 720)))
        )
    meta = ImageMeta(id="bench", width=1280, height=720)
    started = time.perf_counter()
    kb = ground(DetectionSet(meta, tuple(dets)))
    return kb, time.perf_counter() - started


def main() -> int:
    rng = random.Random(42)
    store = DatasetStore(
        images={}, lexicon=default_lexicon(), prototypes=build_prototypes(), tau=DEFAULT_TAU
    )

    for n_boxes in (1_000, 9_990, 50_000):
        kb, ground_s = big_kb(n_boxes, rng)
        print(f"\nKB with {len(kb.program)} clauses (ground: {ground_s * 1000:.1f} ms)")
        for task, question in QUESTIONS.items():
            samples = []
            for _ in range(9):
                started = time.perf_counter()
                answer(kb, store.parse_question(question))
                samples.append((time.perf_counter() - started) * 1000)
            print(
                f"  {task:9s} median {statistics.median(samples):8.3f} ms"
                f"   max {max(samples):8.3f} ms"
            )

    for n_images in (100, 1_000):
        records = []
        for i in range(n_images):
            boxes = [
                {
                    "class": CLASSES[j],
                    "confidence": 0.9,
                    "bbox": [float(j * 50), float(j * 30), float(j * 50 + 50), float(j * 30 + 40)],
                }
                for j in range(10)
            ]
            records.append(
                {"id": f"img{i:05d}", "width": 1280, "height": 720, "detections": boxes}
            )
        text = json.dumps({"images": records})
        started = time.perf_counter()
        build_store(load_dataset_json(text))
        print(f"\ningest {n_images} images: {time.perf_counter() - started:.3f} s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
