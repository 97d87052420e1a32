#!/usr/bin/env python3
"""Generate placeholder PNGs for the fixture scenes.

The detection fixtures reference savanna.png, riverbank.png, and
pasture.png; nothing in the pipeline reads pixels, but the service's
image endpoint and the console need real files to show. Run this once
to fill fixtures/images/ (binaries stay out of version control).
"""
import json
import os
import sys

from PIL import Image, ImageDraw

FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "fixtures")

BACKGROUNDS = {
    "savanna": (222, 201, 138),
    "riverbank": (146, 183, 161),
    "pasture": (156, 196, 124),
}


def main() -> int:
    with open(os.path.join(FIXTURES, "detections.json"), "r", encoding="utf-8") as fh:
        dataset = json.load(fh)
    out_dir = os.path.join(FIXTURES, "images")
    os.makedirs(out_dir, exist_ok=True)
    for record in dataset["images"]:
        img = Image.new(
            "RGB",
            (record["width"], record["height"]),
            BACKGROUNDS.get(record["id"], (200, 200, 200)),
        )
        draw = ImageDraw.Draw(img)
        for det in record["detections"]:
            x1, y1, x2, y2 = det["bbox"]
            # Flat gray stand-ins where the detector saw animals, so the
            # overlay boxes visibly frame something.
            draw.rectangle((x1, y1, x2, y2), fill=(120, 110, 100))
            draw.text((x1 + 6, y1 + 6), det["class"], fill=(240, 240, 240))
        path = os.path.join(out_dir, record["path"])
        img.save(path)
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
