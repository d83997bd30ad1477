#!/usr/bin/env python3
"""Build the frontend test fixture: a 10-item index plus query images.

Writes into the directory given as argv[1]:
  data/<class>/<img>.png   two classes x five images
  fixture.idx              index over all ten
  query_full.png           96x96 frame with the query patch at (24, 24)
  query_crop.png           the exact 48x48 crop a browser would upload
"""

import sys
from pathlib import Path

import numpy as np
from PIL import Image

from regiongem.index import build_index, save_index
from regiongem.ingest import scan_class_folders


def patch(rng: np.random.Generator, base_rgb, size=48) -> np.ndarray:
    noise = rng.integers(-18, 19, size=(size, size, 3))
    arr = np.clip(np.array(base_rgb) + noise, 0, 255).astype(np.uint8)
    return arr


def main(out_dir: str) -> None:
    out = Path(out_dir)
    data = out / "data"
    classes = {"warm": (210, 90, 40), "cool": (40, 90, 210)}
    for ci, (label, rgb) in enumerate(classes.items()):
        class_dir = data / label
        class_dir.mkdir(parents=True, exist_ok=True)
        for ii in range(5):
            rng = np.random.default_rng([101, ci, ii])
            Image.fromarray(patch(rng, rgb)).save(class_dir / f"{ii}.png")

    index, skipped = build_index(scan_class_folders(data, "fixture"))
    assert not skipped and len(index) == 10
    save_index(index, out / "fixture.idx")

    rng = np.random.default_rng([101, 0, 99])
    crop = patch(rng, classes["warm"])
    full = np.full((96, 96, 3), 190, dtype=np.uint8)
    full[24 : 24 + 48, 24 : 24 + 48] = crop
    Image.fromarray(full).save(out / "query_full.png")
    Image.fromarray(crop).save(out / "query_crop.png")
    print(f"fixture ready: {out}")


if __name__ == "__main__":
    main(sys.argv[1])
