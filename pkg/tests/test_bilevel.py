import numpy as np
import pytest

from pseudolossy.bilevel import (
    _decode_core_py,
    _encode_core_py,
    decode_bitimage,
    encode_bitimage,
)
from pseudolossy.errors import BadHeader, TruncatedStream, UnsupportedVersion
from pseudolossy.raster import BitImage


def roundtrip(bits: np.ndarray, use_fast=True):
    img = BitImage.from_array(bits)
    enc = encode_bitimage(img, use_fast=use_fast)
    dec = decode_bitimage(enc, use_fast=use_fast)
    assert (dec.width, dec.height) == (img.width, img.height)
    assert np.array_equal(dec.to_array(), bits != 0)
    return enc


@pytest.mark.parametrize("density", [0.001, 0.01, 0.05, 0.5])
def test_roundtrip_random_densities(density):
    rng = np.random.default_rng(int(density * 10000))
    bits = (rng.random((70, 90)) < density).astype(np.uint8)
    roundtrip(bits)


@pytest.mark.parametrize(
    "shape", [(1, 1), (1, 64), (64, 1), (2, 2), (3, 200), (200, 3)]
)
def test_roundtrip_degenerate_shapes(shape):
    rng = np.random.default_rng(shape[0] * 1000 + shape[1])
    roundtrip((rng.random(shape) < 0.3).astype(np.uint8))


def test_roundtrip_checkerboard_and_solids():
    yy, xx = np.mgrid[0:33, 0:47]
    roundtrip(((xx + yy) % 2).astype(np.uint8))
    roundtrip(np.zeros((40, 40), dtype=np.uint8))
    roundtrip(np.ones((40, 40), dtype=np.uint8))


def test_all_zero_compresses_hard():
    enc = roundtrip(np.zeros((64, 64), dtype=np.uint8))
    assert len(enc) - 9 < 40  # payload only


def test_all_zero_sublinear_growth():
    sizes = {}
    for n in (64, 128, 256):
        enc = encode_bitimage(BitImage.from_array(np.zeros((n, n), dtype=np.uint8)))
        sizes[n] = len(enc) - 9
    # quadrupling the pixel count must not quadruple the stream
    assert sizes[128] < 2 * sizes[64] + 8
    assert sizes[256] < 2 * sizes[128] + 8


def test_encoder_deterministic():
    rng = np.random.default_rng(9)
    bits = (rng.random((50, 50)) < 0.1).astype(np.uint8)
    img = BitImage.from_array(bits)
    assert encode_bitimage(img) == encode_bitimage(img)


def test_fast_and_python_cores_agree():
    rng = np.random.default_rng(21)
    for _ in range(5):
        w, h = int(rng.integers(1, 60)), int(rng.integers(1, 60))
        bits = (rng.random((h, w)) < rng.uniform(0, 0.6)).astype(np.uint8)
        img = BitImage.from_array(bits)
        fast = encode_bitimage(img, use_fast=True)
        slow = encode_bitimage(img, use_fast=False)
        assert fast == slow
        assert np.array_equal(
            decode_bitimage(fast, use_fast=False).to_array(), bits
        )


def test_python_core_roundtrip_direct():
    rng = np.random.default_rng(33)
    bits = (rng.random((20, 30)) < 0.2).astype(np.uint8)
    payload = _encode_core_py(bits)
    assert np.array_equal(_decode_core_py(payload, 30, 20), bits)


def test_decode_bad_header():
    with pytest.raises(BadHeader):
        decode_bitimage(b"\x00\x00")
    with pytest.raises(BadHeader):
        # zero width
        decode_bitimage(b"\x00\x00\x00\x00" + b"\x00\x00\x00\x01" + b"\x01" + bytes(8))


def test_decode_unsupported_version():
    enc = bytearray(encode_bitimage(BitImage.from_array(np.zeros((4, 4), dtype=np.uint8))))
    enc[8] = 7
    with pytest.raises(UnsupportedVersion):
        decode_bitimage(bytes(enc))


@pytest.mark.parametrize("use_fast", [True, False])
def test_truncation_always_errors(use_fast):
    rng = np.random.default_rng(4)
    bits = (rng.random((16, 16)) < 0.3).astype(np.uint8)
    enc = encode_bitimage(BitImage.from_array(bits))
    for cut in range(9, len(enc)):
        with pytest.raises(TruncatedStream):
            decode_bitimage(enc[:cut], use_fast=use_fast)


def test_corpus_canny_maps_compress(corpus_dir):
    from pseudolossy import canny, load_ppm, to_luma

    ratios = []
    for path in sorted(corpus_dir.glob("*.ppm")):
        edges = canny(to_luma(load_ppm(path.read_bytes())))
        enc = encode_bitimage(edges)
        assert len(enc) < len(edges.packed)
        ratios.append(len(edges.packed) / len(enc))
    ratios.sort()
    median = ratios[(len(ratios) - 1) // 2]
    assert 2 <= median <= 20
