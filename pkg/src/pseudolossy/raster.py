"""Pixel buffer types, PPM I/O and color conversion.

All image types are thin immutable wrappers around numpy arrays. The only
ingestion format is binary PPM (P6, maxval 255); anything else enters through
an external converter upstream of the codec.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadHeader, BadMagic, TruncatedPixelData, UnsupportedMaxval

# ITU-R BT.601 luma weights.
_LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])


def round_half_up(a):
    """Round to nearest integer, halves away from zero (values here are >= 0)."""
    return np.floor(np.asarray(a, dtype=np.float64) + 0.5)


@dataclass(frozen=True)
class RasterImage:
    """8-bit RGB image; pixels is an (h, w, 3) uint8 array."""

    pixels: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.pixels, dtype=np.uint8)
        if p.ndim != 3 or p.shape[2] != 3 or p.shape[0] < 1 or p.shape[1] < 1:
            raise ValueError("pixels must be a non-empty (h, w, 3) array")
        p = np.ascontiguousarray(p)
        p.setflags(write=False)
        object.__setattr__(self, "pixels", p)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other):
        return isinstance(other, RasterImage) and np.array_equal(self.pixels, other.pixels)


@dataclass(frozen=True)
class LumaImage:
    """8-bit grayscale image; samples is an (h, w) uint8 array."""

    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.uint8)
        if s.ndim != 2 or s.shape[0] < 1 or s.shape[1] < 1:
            raise ValueError("samples must be a non-empty (h, w) array")
        s = np.ascontiguousarray(s)
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def width(self) -> int:
        return self.samples.shape[1]

    @property
    def height(self) -> int:
        return self.samples.shape[0]


@dataclass(frozen=True)
class BitImage:
    """1 bit/pixel image, row-major packed MSB-first; padding bits are zero."""

    width: int
    height: int
    packed: bytes = field(repr=False)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("width and height must be >= 1")
        expect = (self.width * self.height + 7) // 8
        if len(self.packed) != expect:
            raise ValueError(f"packed length {len(self.packed)}, expected {expect}")
        n = self.width * self.height
        pad = 8 * expect - n
        if pad and (self.packed[-1] & ((1 << pad) - 1)):
            raise ValueError("trailing padding bits must be zero")

    @classmethod
    def from_array(cls, bits: np.ndarray) -> "BitImage":
        """Build from an (h, w) array of 0/1 values."""
        b = np.asarray(bits)
        if b.ndim != 2:
            raise ValueError("bits must be 2-D")
        flat = (b.reshape(-1) != 0).astype(np.uint8)
        packed = np.packbits(flat)
        return cls(width=b.shape[1], height=b.shape[0], packed=packed.tobytes())

    def to_array(self) -> np.ndarray:
        """Unpack to an (h, w) uint8 array of 0/1."""
        flat = np.unpackbits(np.frombuffer(self.packed, dtype=np.uint8))
        return flat[: self.width * self.height].reshape(self.height, self.width)

    def popcount(self) -> int:
        return int(np.unpackbits(np.frombuffer(self.packed, dtype=np.uint8)).sum())


def load_ppm(data: bytes) -> RasterImage:
    """Parse a binary PPM (P6, maxval 255)."""
    if len(data) < 2 or data[:2] != b"P6":
        raise BadMagic("not a P6 PPM stream")
    pos = 2
    fields = []
    while len(fields) < 3:
        # skip whitespace (and '#' comments) between header tokens
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos] == ord("#"):
            while pos < len(data) and data[pos] != ord("\n"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if pos == start:
            raise BadHeader("truncated header")
        token = data[start:pos]
        if not token.isdigit():
            raise BadHeader(f"non-numeric header token {token!r}")
        fields.append(int(token))
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise BadHeader("dimensions must be positive")
    if maxval != 255:
        raise UnsupportedMaxval(f"maxval {maxval}, only 255 supported")
    pos += 1  # single whitespace byte after maxval
    need = width * height * 3
    raster = data[pos : pos + need]
    if len(raster) < need:
        raise TruncatedPixelData(f"need {need} pixel bytes, got {len(raster)}")
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3)
    return RasterImage(pixels=pixels)


def save_ppm(image: RasterImage) -> bytes:
    """Serialize to binary PPM; canonical header, no comments."""
    header = f"P6\n{image.width} {image.height}\n255\n".encode("ascii")
    return header + image.pixels.tobytes()


def to_luma(image: RasterImage) -> LumaImage:
    """BT.601 luma, round-half-up, clamped to [0, 255]."""
    y = round_half_up(image.pixels.astype(np.float64) @ _LUMA_WEIGHTS)
    return LumaImage(samples=np.clip(y, 0, 255).astype(np.uint8))
