"""Canny edge detection producing the structural conditioning input.

The pipeline is blur -> sobel -> non-maximum suppression -> double threshold
-> hysteresis. Every stage is pinned exactly (rounding, tie-breaking, border
handling) so that output bitmaps are reproducible across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ImageTooSmall
from .raster import BitImage, LumaImage, round_half_up


@dataclass(frozen=True)
class CannyParams:
    """Detector parameters; thresholds are fractions of the max gradient magnitude."""

    sigma: float = 1.4
    radius: int = 2
    low_ratio: float = 0.10
    high_ratio: float = 0.20

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be > 0")
        if self.radius < 1:
            raise ValueError("radius must be >= 1")
        if not (0 < self.low_ratio < self.high_ratio <= 1):
            raise ValueError("need 0 < low_ratio < high_ratio <= 1")


@dataclass(frozen=True)
class GradientField:
    """Per-pixel gradient magnitude and direction quantized to 4 bins.

    Bins: 0 = 0deg (horizontal gradient), 1 = 45deg, 2 = 90deg, 3 = 135deg.
    Bin 0 wherever the gradient is exactly zero.
    """

    magnitude: np.ndarray  # float64, >= 0
    direction: np.ndarray  # uint8 in {0, 1, 2, 3}

    @property
    def width(self) -> int:
        return self.magnitude.shape[1]

    @property
    def height(self) -> int:
        return self.magnitude.shape[0]


def gaussian_kernel(sigma: float, radius: int) -> np.ndarray:
    """1-D Gaussian taps for i in [-radius, radius], normalized to sum 1."""
    i = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(i * i) / (2.0 * sigma * sigma))
    return k / k.sum()


def _shift_clamped(a: np.ndarray, di: int, axis: int) -> np.ndarray:
    """View of `a` shifted by di along axis with clamp-to-border indexing."""
    n = a.shape[axis]
    idx = np.clip(np.arange(n) + di, 0, n - 1)
    return np.take(a, idx, axis=axis)


def gaussian_blur(image: LumaImage, sigma: float = 1.4, radius: int = 2) -> LumaImage:
    """Separable Gaussian blur, clamp-to-border, rounded to 8 bits at the end.

    Tap accumulation runs in fixed i = -radius..radius order (horizontal pass
    first) so results are bit-stable.
    """
    k = gaussian_kernel(sigma, radius)
    src = image.samples.astype(np.float64)
    horiz = np.zeros_like(src)
    for j, i in enumerate(range(-radius, radius + 1)):
        horiz = horiz + k[j] * _shift_clamped(src, i, axis=1)
    out = np.zeros_like(src)
    for j, i in enumerate(range(-radius, radius + 1)):
        out = out + k[j] * _shift_clamped(horiz, i, axis=0)
    return LumaImage(samples=np.clip(round_half_up(out), 0, 255).astype(np.uint8))


def sobel(image: LumaImage) -> GradientField:
    """3x3 Sobel gradients with clamp-to-border."""
    if image.width < 3 or image.height < 3:
        raise ImageTooSmall("sobel needs at least 3x3")
    a = image.samples.astype(np.int64)

    def sh(dx, dy):
        return _shift_clamped(_shift_clamped(a, dx, axis=1), dy, axis=0)

    gx = (
        -sh(-1, -1) + sh(1, -1)
        - 2 * sh(-1, 0) + 2 * sh(1, 0)
        - sh(-1, 1) + sh(1, 1)
    )
    gy = (
        -sh(-1, -1) - 2 * sh(0, -1) - sh(1, -1)
        + sh(-1, 1) + 2 * sh(0, 1) + sh(1, 1)
    )
    mag = np.sqrt((gx * gx + gy * gy).astype(np.float64))
    deg = np.degrees(np.arctan2(gy.astype(np.float64), gx.astype(np.float64))) % 180.0
    direction = (np.floor(deg / 45.0 + 0.5).astype(np.int64) % 4).astype(np.uint8)
    direction[(gx == 0) & (gy == 0)] = 0
    return GradientField(magnitude=mag, direction=direction)


# Neighbor offsets (dx, dy) along the gradient direction, per bin.
_NMS_OFFSETS = {0: (1, 0), 1: (1, 1), 2: (0, 1), 3: (-1, 1)}


def _nms(field: GradientField) -> np.ndarray:
    """Non-maximum suppression mask; out-of-bounds neighbors read as 0.

    A pixel survives iff its magnitude is >= both neighbors along its
    quantized gradient direction (ties survive).
    """
    mag = field.magnitude
    h, w = mag.shape
    keep = np.zeros((h, w), dtype=bool)
    ys, xs = np.mgrid[0:h, 0:w]
    for b, (dx, dy) in _NMS_OFFSETS.items():
        sel = field.direction == b
        for sx, sy in ((dx, dy), (-dx, -dy)):
            nx, ny = xs + sx, ys + sy
            inside = (nx >= 0) & (nx < w) & (ny >= 0) & (ny < h)
            nb = np.zeros((h, w))
            nb[inside] = mag[ny[inside], nx[inside]]
            sel = sel & (mag >= nb)
        keep |= sel
    return keep


def _hysteresis(strong: np.ndarray, weak: np.ndarray) -> np.ndarray:
    """Grow the strong set through 8-connected weak pixels to a fixpoint."""
    result = strong.copy()
    while True:
        grown = result.copy()
        grown[:-1, :] |= result[1:, :]
        grown[1:, :] |= result[:-1, :]
        grown[:, :-1] |= result[:, 1:]
        grown[:, 1:] |= result[:, :-1]
        grown[:-1, :-1] |= result[1:, 1:]
        grown[1:, 1:] |= result[:-1, :-1]
        grown[:-1, 1:] |= result[1:, :-1]
        grown[1:, :-1] |= result[:-1, 1:]
        grown &= weak
        grown |= result
        if np.array_equal(grown, result):
            return result
        result = grown


def canny(image: LumaImage, params: CannyParams = CannyParams()) -> BitImage:
    """Full Canny detector; 1-bits mark edges."""
    if image.width < 5 or image.height < 5:
        raise ImageTooSmall("canny needs at least 5x5")
    blurred = gaussian_blur(image, params.sigma, params.radius)
    field = sobel(blurred)
    max_mag = float(field.magnitude.max())
    if max_mag == 0.0:
        return BitImage.from_array(np.zeros((image.height, image.width), dtype=np.uint8))
    keep = _nms(field)
    low = params.low_ratio * max_mag
    high = params.high_ratio * max_mag
    strong = keep & (field.magnitude >= high)
    weak = keep & (field.magnitude >= low)
    edges = _hysteresis(strong, weak)
    return BitImage.from_array(edges.astype(np.uint8))
