import numpy as np
import pytest

from pseudolossy import EncodeConfig, Strategy, encode_image
from pseudolossy.bundle import TAG_CANNY, TAG_COLORGRID, TAG_PROMPT, TAG_SALIENT, packed_size
from pseudolossy.encoder import FilePromptProvider, fetch_prompt
from pseudolossy.errors import (
    EmptyPrompt,
    ImageTooSmall,
    MissingRegions,
    PromptTooLong,
    ProviderUnavailable,
)
from pseudolossy.raster import RasterImage
from pseudolossy.salient import Rect

from conftest import random_raster


@pytest.fixture(scope="module")
def image():
    rng = np.random.default_rng(17)
    smooth = rng.integers(30, 220, (8, 8, 3))
    return RasterImage(pixels=np.kron(smooth, np.ones((16, 16, 1))).astype(np.uint8))


def cfg(strategy, **kw):
    return EncodeConfig(strategy=strategy, grid_w=16, grid_h=16, **kw)


def test_strategy_sections(image):
    expect = {
        Strategy.PROMPT_ONLY: [TAG_PROMPT],
        Strategy.PROMPT_CANNY: [TAG_PROMPT, TAG_CANNY],
        Strategy.PROMPT_CANNY_COLOR: [TAG_PROMPT, TAG_CANNY, TAG_COLORGRID],
        Strategy.SALIENT_FEATURES: [TAG_PROMPT, TAG_CANNY, TAG_COLORGRID, TAG_SALIENT],
    }
    for strategy, tags in expect.items():
        c = cfg(strategy, salient_regions=(Rect(4, 4, 16, 16),)
                if strategy is Strategy.SALIENT_FEATURES else ())
        b, _ = encode_image(image, 500000, "a scene", c)
        assert [t for t, _ in b.sections] == tags


def test_prompt_only_savings(image):
    _, report = encode_image(image, 200000, "x" * 300, cfg(Strategy.PROMPT_ONLY))
    assert report.savings >= 0.998


def test_bundle_bytes_monotone_across_strategies(image):
    sizes = []
    for strategy in (Strategy.PROMPT_ONLY, Strategy.PROMPT_CANNY,
                     Strategy.PROMPT_CANNY_COLOR, Strategy.SALIENT_FEATURES):
        c = cfg(strategy, salient_regions=(Rect(0, 0, 8, 8),)
                if strategy is Strategy.SALIENT_FEATURES else ())
        b, _ = encode_image(image, 500000, "same prompt", c)
        sizes.append(packed_size(b))
    assert sizes == sorted(sizes)


def test_full_region_salient_below_break_even():
    rng = np.random.default_rng(3)
    img = random_raster(rng, 64, 64)
    _, report = encode_image(
        img, 64 * 64 * 3 + 15, "tiny image",
        cfg(Strategy.SALIENT_FEATURES, salient_regions=(Rect(0, 0, 64, 64),)),
    )
    assert report.savings < 0
    assert report.below_break_even


def test_uniform_image_tiny_bundle():
    img = RasterImage(pixels=np.full((256, 256, 3), 90, dtype=np.uint8))
    b, _ = encode_image(img, 10**6, "flat color", EncodeConfig(strategy=Strategy.PROMPT_CANNY_COLOR))
    assert packed_size(b) < 700


def test_rejects_small_images():
    rng = np.random.default_rng(4)
    with pytest.raises(ImageTooSmall):
        encode_image(random_raster(rng, 63, 64), 1000, "p", cfg(Strategy.PROMPT_ONLY))


def test_salient_without_regions(image):
    with pytest.raises(MissingRegions):
        encode_image(image, 1000, "p", cfg(Strategy.SALIENT_FEATURES))


def test_empty_prompt_rejected(image):
    with pytest.raises(EmptyPrompt):
        encode_image(image, 1000, "", cfg(Strategy.PROMPT_ONLY))


def test_prompt_truncation_and_strict_mode(image):
    long_prompt = "é" * 3000  # 6000 UTF-8 bytes
    b, _ = encode_image(image, 10**6, long_prompt, cfg(Strategy.PROMPT_ONLY))
    payload = b.section(TAG_PROMPT)
    assert len(payload) <= 4096
    payload.decode("utf-8")  # truncation must not split a sequence
    with pytest.raises(PromptTooLong):
        encode_image(image, 10**6, long_prompt,
                     cfg(Strategy.PROMPT_ONLY, strict_prompt=True))


def test_deterministic(image):
    from pseudolossy.bundle import pack

    c = cfg(Strategy.PROMPT_CANNY_COLOR)
    a, _ = encode_image(image, 12345, "prompt", c)
    b, _ = encode_image(image, 12345, "prompt", c)
    assert pack(a) == pack(b)


def test_file_prompt_provider(tmp_path):
    p = tmp_path / "prompt.txt"
    p.write_text("a red barn\n")
    assert fetch_prompt(FilePromptProvider(p), b"") == "a red barn"
    with pytest.raises(ProviderUnavailable):
        fetch_prompt(FilePromptProvider(tmp_path / "missing.txt"), b"")
    empty = tmp_path / "empty.txt"
    empty.write_text("   \n")
    with pytest.raises(EmptyPrompt):
        fetch_prompt(FilePromptProvider(empty), b"")
