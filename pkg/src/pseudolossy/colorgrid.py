"""Low-resolution color grid extraction and its self-contained encoding.

Grid stream layout (big-endian): u16 grid_w, u16 grid_h, u8 mode, payload.
Mode 0: raw RGB888 cells. Mode 1: u8 palette_size, palette RGB888 entries,
4-bit indices packed row-major MSB-first, zero-padded to a byte boundary.

Mode 1 comes from deterministic median-cut quantization (<= 16 colors) and is
selected only when it is both smaller than mode 0 and within the error bound.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import BadHeader, BadMode, GridLargerThanImage, TruncatedPayload
from .raster import RasterImage, round_half_up

_HEADER = struct.Struct(">HHB")
MODE_RAW = 0
MODE_PALETTE = 1
MAX_PALETTE = 16
# Max mean squared RGB error permitted for palette mode.
PALETTE_MSE_BOUND = 100.0


@dataclass(frozen=True)
class ColorGrid:
    """Cell-averaged color conditioning input; cells is (grid_h, grid_w, 3) uint8."""

    cells: np.ndarray

    def __post_init__(self):
        c = np.ascontiguousarray(np.asarray(self.cells, dtype=np.uint8))
        if c.ndim != 3 or c.shape[2] != 3 or c.shape[0] < 1 or c.shape[1] < 1:
            raise ValueError("cells must be a non-empty (grid_h, grid_w, 3) array")
        c.setflags(write=False)
        object.__setattr__(self, "cells", c)

    @property
    def grid_w(self) -> int:
        return self.cells.shape[1]

    @property
    def grid_h(self) -> int:
        return self.cells.shape[0]

    def __eq__(self, other):
        return isinstance(other, ColorGrid) and np.array_equal(self.cells, other.cells)


def cell_bounds(length: int, cells: int) -> list[tuple[int, int]]:
    """Floor-partition of [0, length) into `cells` contiguous spans."""
    return [(i * length // cells, (i + 1) * length // cells) for i in range(cells)]


def extract_grid(image: RasterImage, grid_w: int = 32, grid_h: int = 32) -> ColorGrid:
    """Per-cell arithmetic mean colors, round-half-up."""
    if grid_w > image.width or grid_h > image.height:
        raise GridLargerThanImage(
            f"grid {grid_w}x{grid_h} exceeds image {image.width}x{image.height}"
        )
    cols = cell_bounds(image.width, grid_w)
    rows = cell_bounds(image.height, grid_h)
    src = image.pixels.astype(np.float64)
    cells = np.zeros((grid_h, grid_w, 3), dtype=np.uint8)
    for j, (y0, y1) in enumerate(rows):
        for i, (x0, x1) in enumerate(cols):
            mean = src[y0:y1, x0:x1].mean(axis=(0, 1))
            cells[j, i] = round_half_up(mean).astype(np.uint8)
    return ColorGrid(cells=cells)


def median_cut(colors: np.ndarray, max_colors: int = MAX_PALETTE) -> np.ndarray:
    """Deterministic median-cut palette of <= max_colors RGB entries.

    The box with the largest channel range splits along that channel at the
    median; ties resolve to the lower channel index, then the lower box index.
    Palette entries are per-box channel means, round-half-up, in box order.
    """
    flat = colors.reshape(-1, 3).astype(np.int64)
    boxes = [flat]
    while len(boxes) < max_colors:
        best = -1
        best_range = 0
        best_chan = 0
        for bi, box in enumerate(boxes):
            if len(box) < 2:
                continue
            ranges = box.max(axis=0) - box.min(axis=0)
            chan = int(np.argmax(ranges))  # argmax takes the lowest index on ties
            r = int(ranges[chan])
            if r > best_range:
                best, best_range, best_chan = bi, r, chan
        if best < 0 or best_range == 0:
            break
        box = boxes[best]
        order = np.argsort(box[:, best_chan], kind="stable")
        half = len(box) // 2
        boxes[best] = box[order[:half]]
        boxes.append(box[order[half:]])
    return np.array(
        [round_half_up(b.mean(axis=0)) for b in boxes], dtype=np.uint8
    )


def _assign(colors: np.ndarray, palette: np.ndarray) -> np.ndarray:
    """Nearest palette index per color (squared RGB distance, lowest index wins ties)."""
    diff = colors.reshape(-1, 1, 3).astype(np.int64) - palette.reshape(1, -1, 3).astype(np.int64)
    d2 = (diff * diff).sum(axis=2)
    return d2.argmin(axis=1)


def encode_grid(grid: ColorGrid) -> bytes:
    """Serialize; picks the smaller of raw and palette modes."""
    raw = _HEADER.pack(grid.grid_w, grid.grid_h, MODE_RAW) + grid.cells.tobytes()
    flat = grid.cells.reshape(-1, 3)
    palette = median_cut(flat)
    idx = _assign(flat, palette)
    err = flat.astype(np.int64) - palette[idx].astype(np.int64)
    mse = float((err * err).sum(axis=1).mean())
    if mse > PALETTE_MSE_BOUND:
        return raw
    nibbles = idx.astype(np.uint8)
    if len(nibbles) % 2:
        nibbles = np.concatenate([nibbles, np.zeros(1, dtype=np.uint8)])
    packed = ((nibbles[0::2] << 4) | nibbles[1::2]).tobytes()
    pal = (
        _HEADER.pack(grid.grid_w, grid.grid_h, MODE_PALETTE)
        + bytes([len(palette)])
        + palette.tobytes()
        + packed
    )
    return pal if len(pal) < len(raw) else raw


def decode_grid(data: bytes) -> ColorGrid:
    if len(data) < _HEADER.size:
        raise BadHeader("grid stream shorter than header")
    grid_w, grid_h, mode = _HEADER.unpack_from(data)
    if grid_w < 1 or grid_h < 1:
        raise BadHeader("grid dimensions must be >= 1")
    payload = data[_HEADER.size:]
    n = grid_w * grid_h
    if mode == MODE_RAW:
        if len(payload) < n * 3:
            raise TruncatedPayload("raw cell data truncated")
        cells = np.frombuffer(payload[: n * 3], dtype=np.uint8).reshape(grid_h, grid_w, 3)
        return ColorGrid(cells=cells)
    if mode == MODE_PALETTE:
        if len(payload) < 1:
            raise TruncatedPayload("missing palette size")
        psize = payload[0]
        if psize < 1 or psize > MAX_PALETTE:
            raise BadHeader(f"palette size {psize} out of range")
        need = 1 + psize * 3 + (n + 1) // 2
        if len(payload) < need:
            raise TruncatedPayload("palette payload truncated")
        palette = np.frombuffer(payload[1 : 1 + psize * 3], dtype=np.uint8).reshape(psize, 3)
        packed = np.frombuffer(payload[1 + psize * 3 : need], dtype=np.uint8)
        nibbles = np.empty(len(packed) * 2, dtype=np.uint8)
        nibbles[0::2] = packed >> 4
        nibbles[1::2] = packed & 0x0F
        idx = nibbles[:n]
        if idx.max(initial=0) >= psize:
            raise BadHeader("palette index out of range")
        return ColorGrid(cells=palette[idx].reshape(grid_h, grid_w, 3))
    raise BadMode(f"unknown grid mode {mode}")
