"""Rectangular salient regions: cropped patches transmitted unmodified.

SALIENT section layout (big-endian): u16 region count, then per region
u32 x, u32 y, u32 w, u32 h, u8 patch_format, u32 patch_len, patch bytes.
patch_format 0 = binary PPM (P6) pixels.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import BadHeader, OutOfBounds, TruncatedPayload, ZeroArea
from .raster import BitImage, RasterImage, load_ppm, save_ppm

PATCH_FORMAT_PPM = 0


@dataclass(frozen=True)
class Rect:
    x: int
    y: int
    w: int
    h: int


@dataclass(frozen=True)
class SalientRegion:
    x: int
    y: int
    w: int
    h: int
    patch_format: int
    patch: bytes

    def rect(self) -> Rect:
        return Rect(self.x, self.y, self.w, self.h)

    def patch_image(self) -> RasterImage:
        if self.patch_format != PATCH_FORMAT_PPM:
            raise BadHeader(f"unknown patch format {self.patch_format}")
        img = load_ppm(self.patch)
        if img.width != self.w or img.height != self.h:
            raise BadHeader("patch dimensions disagree with region extent")
        return img


def _check_bounds(rect: Rect, width: int, height: int):
    if rect.w < 1 or rect.h < 1:
        raise ZeroArea(f"region {rect} has no area")
    if rect.x < 0 or rect.y < 0 or rect.x + rect.w > width or rect.y + rect.h > height:
        raise OutOfBounds(f"region {rect} exceeds {width}x{height} image")


def crop_patch(image: RasterImage, rect: Rect) -> SalientRegion:
    """Bit-exact crop stored as a PPM patch."""
    _check_bounds(rect, image.width, image.height)
    patch = RasterImage(pixels=image.pixels[rect.y : rect.y + rect.h, rect.x : rect.x + rect.w])
    return SalientRegion(
        x=rect.x, y=rect.y, w=rect.w, h=rect.h,
        patch_format=PATCH_FORMAT_PPM, patch=save_ppm(patch),
    )


def rasterize_mask(regions, width: int, height: int) -> BitImage:
    """Union mask of all regions; 1 = keep (do not regenerate)."""
    mask = np.zeros((height, width), dtype=np.uint8)
    for r in regions:
        _check_bounds(Rect(r.x, r.y, r.w, r.h), width, height)
        mask[r.y : r.y + r.h, r.x : r.x + r.w] = 1
    return BitImage.from_array(mask)


def validate_regions(rects, width: int, height: int) -> list[Rect]:
    """Bounds/area checks + (y, x) ordering; overlaps and duplicates pass through."""
    for r in rects:
        _check_bounds(r, width, height)
    return sorted(rects, key=lambda r: (r.y, r.x))


def encode_regions(regions) -> bytes:
    out = bytearray(struct.pack(">H", len(regions)))
    for r in regions:
        out += struct.pack(">IIIIBI", r.x, r.y, r.w, r.h, r.patch_format, len(r.patch))
        out += r.patch
    return bytes(out)


def decode_regions(data: bytes) -> list[SalientRegion]:
    if len(data) < 2:
        raise BadHeader("salient section shorter than count field")
    (count,) = struct.unpack_from(">H", data)
    pos = 2
    regions = []
    for _ in range(count):
        if pos + 21 > len(data):
            raise TruncatedPayload("region header truncated")
        x, y, w, h, fmt, plen = struct.unpack_from(">IIIIBI", data, pos)
        pos += 21
        if pos + plen > len(data):
            raise TruncatedPayload("region patch truncated")
        regions.append(SalientRegion(x=x, y=y, w=w, h=h, patch_format=fmt, patch=data[pos : pos + plen]))
        pos += plen
    return regions
