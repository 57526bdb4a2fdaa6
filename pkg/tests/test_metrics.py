import sys
import textwrap

import numpy as np
import pytest

from pseudolossy import RasterImage, cosine_similarity, embed_builtin, load_ppm, ssim, to_luma
from pseudolossy.errors import DimensionMismatch, ImageTooSmall, ProviderUnavailable
from pseudolossy.metrics import BuiltinHistogramEmbedder, ExternalEmbeddingProvider

from conftest import random_raster
from oracles.ssim_ref import ssim_ref


@pytest.fixture(scope="module")
def pair():
    rng = np.random.default_rng(42)
    a = random_raster(rng, 24, 20)
    b = random_raster(rng, 24, 20)
    return a, b


def test_ssim_identity(pair):
    a, _ = pair
    assert ssim(a, a) == pytest.approx(1.0, abs=1e-9)


def test_ssim_symmetric(pair):
    a, b = pair
    assert ssim(a, b) == ssim(b, a)


def test_ssim_inverted_negative():
    rng = np.random.default_rng(1)
    smooth = rng.integers(40, 215, (4, 4, 3))
    a = RasterImage(pixels=np.kron(smooth, np.ones((8, 8, 1))).astype(np.uint8))
    b = RasterImage(pixels=255 - a.pixels)
    assert ssim(a, b) < 0


def test_ssim_matches_bruteforce_oracle():
    rng = np.random.default_rng(7)
    for seed in range(10):
        r = np.random.default_rng(seed)
        w, h = int(r.integers(8, 30)), int(r.integers(8, 30))
        a = random_raster(r, w, h)
        noise = r.integers(-20, 21, a.pixels.shape)
        b = RasterImage(pixels=np.clip(a.pixels.astype(int) + noise, 0, 255).astype(np.uint8))
        ref = ssim_ref(to_luma(a).samples, to_luma(b).samples)
        assert ssim(a, b) == pytest.approx(ref, abs=1e-6)


def test_ssim_decreases_with_noise():
    rng = np.random.default_rng(3)
    smooth = rng.integers(60, 200, (6, 6, 3))
    base = RasterImage(pixels=np.kron(smooth, np.ones((8, 8, 1))).astype(np.uint8))
    noise = rng.standard_normal(base.pixels.shape)
    scores = []
    for amp in (0, 5, 15, 40):
        noisy = RasterImage(
            pixels=np.clip(base.pixels + amp * noise, 0, 255).astype(np.uint8)
        )
        scores.append(ssim(base, noisy))
    assert scores == sorted(scores, reverse=True)
    assert scores[0] == pytest.approx(1.0, abs=1e-9)


def test_ssim_errors(pair):
    a, _ = pair
    rng = np.random.default_rng(0)
    with pytest.raises(DimensionMismatch):
        ssim(a, random_raster(rng, 10, 10))
    small = random_raster(rng, 7, 7)
    with pytest.raises(ImageTooSmall):
        ssim(small, small)


def test_embed_uniform_fallback():
    img = RasterImage(pixels=np.full((30, 30, 3), 50, dtype=np.uint8))
    v = embed_builtin(img)
    assert v.shape == (384,)
    assert np.allclose(v, 1.0 / np.sqrt(384))


def test_embed_unit_norm_nonnegative(pair):
    a, _ = pair
    v = embed_builtin(a)
    assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-6)
    assert v.min() >= 0


def test_embed_deterministic(pair):
    a, _ = pair
    assert np.array_equal(embed_builtin(a), embed_builtin(a))


def test_embed_mirror_sensitive():
    rng = np.random.default_rng(5)
    img = random_raster(rng, 60, 40)
    mirrored = RasterImage(pixels=img.pixels[:, ::-1])
    assert not np.array_equal(embed_builtin(img), embed_builtin(mirrored))


def test_cosine_basics():
    e = np.zeros(384)
    e[0] = 1.0
    f = np.zeros(384)
    f[1] = 1.0
    assert cosine_similarity(e, e) == 1.0
    assert cosine_similarity(e, f) == 0.0
    with pytest.raises(DimensionMismatch):
        cosine_similarity(e, np.ones(10))


def test_builtin_embedder_path(tmp_path, pair):
    from pseudolossy import save_ppm

    a, _ = pair
    p = tmp_path / "a.ppm"
    p.write_bytes(save_ppm(a))
    emb = BuiltinHistogramEmbedder()
    assert np.array_equal(emb.embed_path(p), embed_builtin(a))


PROVIDER_SCRIPT = textwrap.dedent(
    """
    import sys, os
    for line in sys.stdin:
        parts = line.split(None, 1)
        if not parts or parts[0] != "EMBED":
            print("ERR bad request", flush=True)
            continue
        path = parts[1].strip()
        if not os.path.isfile(path):
            print("ERR no such file", flush=True)
            continue
        size = os.path.getsize(path)
        print("OK 3 " + " ".join(str((size >> (8 * i)) % 7 / 10.0) for i in range(3)),
              flush=True)
    """
)


def test_external_provider_protocol(tmp_path):
    script = tmp_path / "provider.py"
    script.write_text(PROVIDER_SCRIPT)
    f = tmp_path / "blob.bin"
    f.write_bytes(b"x" * 100)
    provider = ExternalEmbeddingProvider(f"{sys.executable} {script}")
    try:
        v = provider.embed_path(f)
        assert v.shape == (3,)
        assert np.array_equal(v, provider.embed_path(f))  # deterministic
        with pytest.raises(ProviderUnavailable):
            provider.embed_path(tmp_path / "missing.bin")
    finally:
        provider.close()


def test_external_provider_bad_command():
    with pytest.raises(ProviderUnavailable):
        ExternalEmbeddingProvider("/nonexistent/binary-xyz")
