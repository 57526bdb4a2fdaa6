#!/usr/bin/env python3
"""Regenerate the bundled sample corpus (deterministic synthetic photos).

Each entry is a binary PPM with a sibling .txt prompt; two entries also carry
a .regions file marking salient rectangles. Run from the repo root:

    python3 tools/make_corpus.py corpus/
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from pseudolossy.raster import RasterImage, save_ppm  # noqa: E402


def smooth_field(rng, h, w, cells=6, lo=0.0, hi=1.0):
    """Low-frequency random field via bilinear upsampling of a coarse grid."""
    coarse = rng.uniform(lo, hi, size=(cells, cells))
    ys = np.linspace(0, cells - 1, h)
    xs = np.linspace(0, cells - 1, w)
    y0 = np.clip(ys.astype(int), 0, cells - 2)
    x0 = np.clip(xs.astype(int), 0, cells - 2)
    ty = (ys - y0)[:, None]
    tx = (xs - x0)[None, :]
    a = coarse[y0][:, x0]
    b = coarse[y0][:, x0 + 1]
    c = coarse[y0 + 1][:, x0]
    d = coarse[y0 + 1][:, x0 + 1]
    return a * (1 - ty) * (1 - tx) + b * (1 - ty) * tx + c * ty * (1 - tx) + d * ty * tx


def disk(img, cx, cy, r, color):
    h, w, _ = img.shape
    yy, xx = np.mgrid[0:h, 0:w]
    img[(xx - cx) ** 2 + (yy - cy) ** 2 <= r * r] = color


def box(img, x, y, w, h, color):
    img[y : y + h, x : x + w] = color


SPECS = [
    # (name, width, height, prompt)
    ("meadow", 640, 420, "A wide green meadow under a pale morning sky, a single round hay bale "
     "on the left and a wooden fence running along the bottom edge."),
    ("harbor", 720, 400, "A small harbor at dusk with three sailboats, rectangular warehouses "
     "along the waterline and an orange sun low over calm water."),
    ("canyon", 512, 512, "Steep red canyon walls with layered sandstone bands, a narrow river "
     "cutting diagonally through the frame and deep shadows on the right."),
    ("city", 768, 432, "A night city skyline with tall rectangular towers, lit windows in a "
     "regular grid and a dark violet sky above."),
    ("orchard", 600, 450, "Rows of apple trees with round crowns receding toward the horizon, "
     "ripe red fruit and a dirt path between the rows."),
    ("lighthouse", 512, 640, "A white lighthouse with a red lantern room on a rocky point, "
     "heavy grey clouds and a bright beam over the sea."),
    ("market", 700, 420, "A street market with striped awnings, crates of oranges and lemons "
     "stacked in front and a chalkboard price sign."),
    ("dunes", 640, 400, "Rolling sand dunes with sharp wind-carved ridgelines, long shadows "
     "at golden hour and a lone walker near the crest."),
    ("glacier", 680, 440, "A blue-white glacier tongue between dark mountain ridges, crevasse "
     "lines across the ice and a milky meltwater lake below."),
    ("plaza", 560, 480, "A sunlit plaza with a circular fountain in the center, checkered "
     "paving stones and cafe umbrellas along one side."),
]


def build_image(rng, w, h):
    base = np.zeros((h, w, 3))
    for ch in range(3):
        base[:, :, ch] = smooth_field(rng, h, w, cells=int(rng.integers(4, 8)),
                                      lo=40, hi=215)
    img = base.astype(np.uint8).copy()
    # a handful of hard-edged shapes so Canny finds sparse structure
    for _ in range(int(rng.integers(3, 7))):
        color = rng.integers(0, 256, 3)
        if rng.random() < 0.5:
            r = int(rng.integers(min(w, h) // 16, min(w, h) // 6))
            disk(img, int(rng.integers(r, w - r)), int(rng.integers(r, h - r)), r, color)
        else:
            bw = int(rng.integers(w // 12, w // 4))
            bh = int(rng.integers(h // 12, h // 4))
            box(img, int(rng.integers(0, w - bw)), int(rng.integers(0, h - bh)), bw, bh, color)
    # fine detail: scattered pebbles/foliage-scale shapes and a few thin lines,
    # so Canny density lands near natural-photo levels
    for _ in range(int(rng.integers(250, 400))):
        color = rng.integers(0, 256, 3)
        r = int(rng.integers(2, 7))
        disk(img, int(rng.integers(r, w - r)), int(rng.integers(r, h - r)), r, color)
    for _ in range(int(rng.integers(6, 14))):
        color = rng.integers(0, 256, 3)
        x0, y0 = int(rng.integers(0, w)), int(rng.integers(0, h))
        length = int(rng.integers(w // 8, w // 2))
        angle = rng.uniform(0, np.pi)
        for t in range(length):
            x = int(x0 + t * np.cos(angle))
            y = int(y0 + t * np.sin(angle))
            if 0 <= x < w - 1 and 0 <= y < h - 1:
                img[y : y + 2, x : x + 2] = color
    # gentle smooth shading variation on top
    shade = smooth_field(rng, h, w, cells=5, lo=0.85, hi=1.15)
    img = np.clip(img.astype(np.float64) * shade[:, :, None], 0, 255).astype(np.uint8)
    return img


def main(out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i, (name, w, h, prompt) in enumerate(SPECS):
        rng = np.random.default_rng(1000 + i)
        img = build_image(rng, w, h)
        (out / f"{name}.ppm").write_bytes(save_ppm(RasterImage(pixels=img)))
        (out / f"{name}.txt").write_text(prompt + "\n")
    # two entries with hand-placed salient rectangles
    (out / "meadow.regions").write_text("80 120 160 120\n420 60 120 90\n")
    (out / "city.regions").write_text("300 100 200 160\n")
    print(f"wrote {len(SPECS)} images to {out}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "corpus")
