"""Generate the sidecar's cross-language test fixtures.

Everything the TypeScript tests consume is produced here by the primary
Python codec, so the sidecar tests verify the wire-format contract against
independently generated artifacts. Deterministic; re-running rewrites
identical bytes.

Usage: python3 tools/make_fixtures.py test/fixtures
"""

import base64
import json
import shutil
import sys
from pathlib import Path

import numpy as np

from pseudolossy import (
    ColorGrid,
    EncodeConfig,
    RasterImage,
    Strategy,
    encode_image,
    pack,
)
from pseudolossy.bilevel import encode_bitimage
from pseudolossy.preview import preview_reconstruct
from pseudolossy.colorgrid import encode_grid
from pseudolossy.raster import BitImage, save_ppm
from pseudolossy.salient import Rect


def b64(data: bytes) -> str:
    return base64.b64encode(data).decode("ascii")


def mosaic_image(seed: int, tiles: int, scale: int) -> RasterImage:
    rng = np.random.default_rng(seed)
    coarse = rng.integers(0, 256, (tiles, tiles, 3))
    return RasterImage(pixels=np.kron(coarse, np.ones((scale, scale, 1))).astype(np.uint8))


def main(out_dir: Path):
    out_dir.mkdir(parents=True, exist_ok=True)

    # The primary's golden bundle, copied verbatim.
    shutil.copyfile(Path(__file__).parents[2] / "tests" / "data" / "golden.plcb", out_dir / "golden.plcb")

    # Salient fixture: 96x96 mosaic, full pipeline, two regions.
    img = mosaic_image(401, 8, 12)
    bundle, _ = encode_image(
        img,
        250_000,
        "sidecar fixture: a mosaic with two preserved regions",
        EncodeConfig(
            strategy=Strategy.SALIENT_FEATURES,
            grid_w=16,
            grid_h=16,
            salient_regions=(Rect(8, 8, 32, 24), Rect(48, 56, 40, 32)),
        ),
    )
    (out_dir / "salient.plcb").write_bytes(pack(bundle))
    (out_dir / "salient_original.ppm").write_bytes(save_ppm(img))
    (out_dir / "salient_preview.ppm").write_bytes(save_ppm(preview_reconstruct(bundle)))
    (out_dir / "salient_regions.json").write_text(
        json.dumps([[8, 8, 32, 24], [48, 56, 40, 32]]) + "\n"
    )

    # Full-image salient region: reconstruction must equal the original.
    small = mosaic_image(402, 8, 8)
    bundle, _ = encode_image(
        small,
        80_000,
        "sidecar fixture: fully preserved image",
        EncodeConfig(strategy=Strategy.SALIENT_FEATURES, salient_regions=(Rect(0, 0, 64, 64),)),
    )
    (out_dir / "fullpaste.plcb").write_bytes(pack(bundle))
    (out_dir / "fullpaste_original.ppm").write_bytes(save_ppm(small))

    # Prompt-only bundle (no pixels at all).
    bundle, _ = encode_image(
        small, 80_000, "sidecar fixture: prompt only", EncodeConfig(strategy=Strategy.PROMPT_ONLY)
    )
    (out_dir / "prompt_only.plcb").write_bytes(pack(bundle))

    # Bi-level streams with their expected bitmaps.
    cases = []
    specs = [(1, 1, 0.5), (7, 3, 0.3), (64, 64, 0.05), (33, 17, 0.5), (128, 1, 0.2), (1, 128, 0.2)]
    for i, (w, h, density) in enumerate(specs):
        rng = np.random.default_rng(500 + i)
        bits = (rng.random((h, w)) < density).astype(np.uint8)
        stream = encode_bitimage(BitImage.from_array(bits))
        cases.append({"w": w, "h": h, "stream": b64(stream), "bits": b64(bits.tobytes())})
    (out_dir / "bilevel_cases.json").write_text(json.dumps(cases, indent=1) + "\n")

    # Color-grid streams, one per mode.
    rng = np.random.default_rng(600)
    noisy = ColorGrid(cells=rng.integers(0, 256, (6, 5, 3)).astype(np.uint8))
    palette_colors = np.array([[255, 0, 0], [0, 255, 0], [0, 0, 255]], dtype=np.uint8)
    few = ColorGrid(cells=palette_colors[rng.integers(0, 3, (4, 4))])
    grid_cases = []
    for grid in (noisy, few):
        stream = encode_grid(grid)
        grid_cases.append(
            {
                "gridW": grid.grid_w,
                "gridH": grid.grid_h,
                "mode": stream[4],
                "stream": b64(stream),
                "cells": b64(grid.cells.tobytes()),
            }
        )
    assert grid_cases[0]["mode"] == 0 and grid_cases[1]["mode"] == 1, "expected one fixture per mode"
    (out_dir / "grid_cases.json").write_text(json.dumps(grid_cases, indent=1) + "\n")

    print(f"wrote fixtures to {out_dir}")


if __name__ == "__main__":
    main(Path(sys.argv[1] if len(sys.argv) > 1 else "test/fixtures"))
