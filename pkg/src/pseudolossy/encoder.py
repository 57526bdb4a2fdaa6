"""Strategy-driven extraction: turns an image plus prompt into a bundle.

The four strategies mirror the four experiment configurations: prompt only,
prompt + edges, prompt + edges + color grid, and the salient-feature variant
that additionally ships untouched patches.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from pathlib import Path

from . import bilevel, bundle, colorgrid, salient
from .edgemap import CannyParams, canny
from .errors import (
    EmptyPrompt,
    ImageTooSmall,
    MissingRegions,
    PromptTooLong,
    ProviderUnavailable,
)
from .raster import RasterImage, to_luma

log = logging.getLogger(__name__)

MIN_DIMENSION = 64
MAX_PROMPT_BYTES = 4096


class Strategy(enum.Enum):
    PROMPT_ONLY = "prompt"
    PROMPT_CANNY = "canny"
    PROMPT_CANNY_COLOR = "canny-color"
    SALIENT_FEATURES = "salient"


# Section tags emitted per strategy.
_STRATEGY_TAGS = {
    Strategy.PROMPT_ONLY: (bundle.TAG_PROMPT,),
    Strategy.PROMPT_CANNY: (bundle.TAG_PROMPT, bundle.TAG_CANNY),
    Strategy.PROMPT_CANNY_COLOR: (bundle.TAG_PROMPT, bundle.TAG_CANNY, bundle.TAG_COLORGRID),
    Strategy.SALIENT_FEATURES: (
        bundle.TAG_PROMPT,
        bundle.TAG_CANNY,
        bundle.TAG_COLORGRID,
        bundle.TAG_SALIENT,
    ),
}


@dataclass(frozen=True)
class EncodeConfig:
    strategy: Strategy = Strategy.PROMPT_CANNY_COLOR
    canny: CannyParams = field(default_factory=CannyParams)
    grid_w: int = 32
    grid_h: int = 32
    salient_regions: tuple = ()
    strict_prompt: bool = False


def _prompt_payload(prompt: str, strict: bool) -> bytes:
    data = prompt.encode("utf-8")
    if len(data) > MAX_PROMPT_BYTES:
        if strict:
            raise PromptTooLong(f"prompt is {len(data)} bytes, limit {MAX_PROMPT_BYTES}")
        log.warning("prompt truncated from %d to %d bytes", len(data), MAX_PROMPT_BYTES)
        data = data[:MAX_PROMPT_BYTES]
        while data and (data[-1] & 0xC0) == 0x80:  # don't split a UTF-8 sequence
            data = data[:-1]
        if data and data[-1] >= 0xC0:  # dangling lead byte
            data = data[:-1]
    return data


def encode_image(
    image: RasterImage,
    original_byte_size: int,
    prompt: str,
    config: EncodeConfig = EncodeConfig(),
) -> tuple[bundle.Bundle, bundle.SavingsReport]:
    """Extract the configured conditioning inputs and pack them."""
    if not prompt:
        raise EmptyPrompt("prompt must be non-empty")
    if image.width < MIN_DIMENSION or image.height < MIN_DIMENSION:
        raise ImageTooSmall(
            f"{image.width}x{image.height} below minimum {MIN_DIMENSION}x{MIN_DIMENSION}"
        )
    tags = _STRATEGY_TAGS[config.strategy]
    if config.strategy is Strategy.SALIENT_FEATURES and not config.salient_regions:
        raise MissingRegions("SalientFeatures strategy requires at least one region")

    sections = [(bundle.TAG_PROMPT, _prompt_payload(prompt, config.strict_prompt))]
    if bundle.TAG_CANNY in tags:
        edges = canny(to_luma(image), config.canny)
        sections.append((bundle.TAG_CANNY, bilevel.encode_bitimage(edges)))
    if bundle.TAG_COLORGRID in tags:
        grid = colorgrid.extract_grid(image, config.grid_w, config.grid_h)
        sections.append((bundle.TAG_COLORGRID, colorgrid.encode_grid(grid)))
    if bundle.TAG_SALIENT in tags:
        rects = salient.validate_regions(config.salient_regions, image.width, image.height)
        regions = [salient.crop_patch(image, r) for r in rects]
        sections.append((bundle.TAG_SALIENT, salient.encode_regions(regions)))

    b = bundle.Bundle(
        original_width=image.width,
        original_height=image.height,
        original_byte_size=original_byte_size,
        sections=tuple(sections),
    )
    report = bundle.savings_report(b)
    if report.below_break_even:
        log.warning(
            "bundle (%d B) is not smaller than the original (%d B)",
            report.bundle_bytes,
            report.original_bytes,
        )
    return b, report


class PromptProvider:
    """Source of image descriptions; implementations may call external services."""

    def prompt_for(self, image_bytes: bytes, instruction: str = "") -> str:
        raise NotImplementedError


class FilePromptProvider(PromptProvider):
    """Reads the prompt from a sidecar text file; the offline default."""

    def __init__(self, path):
        self.path = Path(path)

    def prompt_for(self, image_bytes: bytes, instruction: str = "") -> str:
        if not self.path.is_file():
            raise ProviderUnavailable(f"prompt file {self.path} not found")
        return self.path.read_text(encoding="utf-8").strip()


def fetch_prompt(provider: PromptProvider, image_bytes: bytes, instruction: str = "") -> str:
    text = provider.prompt_for(image_bytes, instruction)
    if not text:
        raise EmptyPrompt("provider returned an empty prompt")
    return text
