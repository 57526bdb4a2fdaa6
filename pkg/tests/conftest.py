import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make `oracles` importable

REPO_ROOT = Path(__file__).resolve().parents[1]


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    d = REPO_ROOT / "corpus"
    assert d.is_dir() and list(d.glob("*.ppm")), "sample corpus missing"
    return d


def synthetic_luma_fixtures() -> dict[str, np.ndarray]:
    """Small synthetic grayscale images exercising distinct edge geometries."""
    step = np.zeros((32, 32), dtype=np.uint8)
    step[:, 16:] = 255

    ramp = np.tile(np.linspace(0, 255, 32).astype(np.uint8), (32, 1))

    yy, xx = np.mgrid[0:32, 0:32]
    disk = np.where((xx - 16) ** 2 + (yy - 16) ** 2 <= 81, 200, 30).astype(np.uint8)

    checker = (((xx // 4) + (yy // 4)) % 2 * 255).astype(np.uint8)

    uniform = np.full((32, 32), 128, dtype=np.uint8)

    return {"step": step, "ramp": ramp, "disk": disk, "checker": checker, "uniform": uniform}


@pytest.fixture(scope="session")
def luma_fixtures():
    return synthetic_luma_fixtures()


def random_raster(rng: np.random.Generator, w: int, h: int):
    from pseudolossy import RasterImage

    return RasterImage(pixels=rng.integers(0, 256, (h, w, 3), dtype=np.uint8))
