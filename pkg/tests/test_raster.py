import numpy as np
import pytest

from pseudolossy import LumaImage, RasterImage, load_ppm, save_ppm, to_luma
from pseudolossy.errors import BadMagic, TruncatedPixelData, UnsupportedMaxval

from conftest import random_raster


def test_load_ppm_basic():
    data = b"P6\n2 1\n255\n" + bytes([255, 0, 0, 0, 0, 255])
    img = load_ppm(data)
    assert (img.width, img.height) == (2, 1)
    assert tuple(img.pixels[0, 0]) == (255, 0, 0)
    assert tuple(img.pixels[0, 1]) == (0, 0, 255)


def test_load_ppm_bad_magic():
    with pytest.raises(BadMagic):
        load_ppm(b"P5\n2 1\n255\n" + bytes(6))


def test_load_ppm_truncated():
    with pytest.raises(TruncatedPixelData):
        load_ppm(b"P6\n2 2\n255\n" + bytes(6))


def test_load_ppm_bad_maxval():
    with pytest.raises(UnsupportedMaxval):
        load_ppm(b"P6\n1 1\n65535\n" + bytes(6))


def test_save_ppm_canonical_black_pixel():
    img = RasterImage(pixels=np.zeros((1, 1, 3), dtype=np.uint8))
    assert save_ppm(img) == b"P6\n1 1\n255\n" + bytes(3)


@pytest.mark.parametrize("seed", range(5))
def test_ppm_roundtrip_random(seed):
    rng = np.random.default_rng(seed)
    w, h = int(rng.integers(1, 40)), int(rng.integers(1, 40))
    img = random_raster(rng, w, h)
    assert load_ppm(save_ppm(img)) == img


def test_to_luma_values():
    px = np.array([[[255, 255, 255], [255, 0, 0], [0, 255, 0], [0, 0, 255]]], dtype=np.uint8)
    y = to_luma(RasterImage(pixels=px)).samples[0]
    assert y[0] == 255
    assert y[1] == 76  # round(0.299 * 255)
    assert y[2] == 150  # round(0.587 * 255)
    assert y[3] == 29


def test_to_luma_channel_order_sensitive():
    rgb = RasterImage(pixels=np.array([[[200, 50, 10]]], dtype=np.uint8))
    bgr = RasterImage(pixels=np.array([[[10, 50, 200]]], dtype=np.uint8))
    assert to_luma(rgb).samples[0, 0] != to_luma(bgr).samples[0, 0]


def test_bitimage_padding_enforced():
    from pseudolossy import BitImage

    with pytest.raises(ValueError):
        BitImage(width=3, height=1, packed=b"\xff")  # padding bits set
    b = BitImage.from_array(np.ones((1, 3), dtype=np.uint8))
    assert b.packed == b"\xe0"
    assert b.popcount() == 3


def test_luma_image_rejects_empty():
    with pytest.raises(ValueError):
        LumaImage(samples=np.zeros((0, 3), dtype=np.uint8))
