"""Deterministic baseline decoder: no generative model involved.

Builds a viewable stand-in from a bundle: bilinearly upsampled color grid
(mid-gray when absent), dark edge overlay from the decoded Canny map, and
bit-exact pasting of salient patches on top.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bilevel, bundle, colorgrid, salient
from .raster import RasterImage, round_half_up


@dataclass(frozen=True)
class PreviewParams:
    edge_overlay_value: int = 32
    output_w: int | None = None  # default: bundle original dims
    output_h: int | None = None

    def __post_init__(self):
        if not (0 <= self.edge_overlay_value <= 255):
            raise ValueError("edge_overlay_value must be in [0, 255]")


def _axis_interp(out_len: int, cells: int):
    """Indices and weights interpolating output pixels between cell centers."""
    bounds = colorgrid.cell_bounds(out_len, cells)
    centers = np.array([(a + b - 1) / 2.0 for a, b in bounds])
    x = np.arange(out_len, dtype=np.float64)
    hi = np.searchsorted(centers, x, side="right")
    lo = np.clip(hi - 1, 0, cells - 1)
    hi = np.clip(hi, 0, cells - 1)
    denom = centers[hi] - centers[lo]
    t = np.where(denom > 0, (x - centers[lo]) / np.where(denom > 0, denom, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)  # clamp outside the first/last center
    return lo, hi, t


def upsample_grid(grid: colorgrid.ColorGrid, out_w: int, out_h: int) -> np.ndarray:
    """Bilinear upsample with cell centers aligned to partition centers."""
    xlo, xhi, tx = _axis_interp(out_w, grid.grid_w)
    ylo, yhi, ty = _axis_interp(out_h, grid.grid_h)
    cells = grid.cells.astype(np.float64)
    rows_lo = cells[:, xlo] * (1.0 - tx)[None, :, None] + cells[:, xhi] * tx[None, :, None]
    out = rows_lo[ylo] * (1.0 - ty)[:, None, None] + rows_lo[yhi] * ty[:, None, None]
    return np.clip(round_half_up(out), 0, 255).astype(np.uint8)


def preview_reconstruct(b: bundle.Bundle, params: PreviewParams = PreviewParams()) -> RasterImage:
    out_w = params.output_w or b.original_width
    out_h = params.output_h or b.original_height
    grid_bytes = b.section(bundle.TAG_COLORGRID)
    if grid_bytes is not None:
        canvas = upsample_grid(colorgrid.decode_grid(grid_bytes), out_w, out_h)
    else:
        canvas = np.full((out_h, out_w, 3), 128, dtype=np.uint8)

    canny_bytes = b.section(bundle.TAG_CANNY)
    if canny_bytes is not None:
        edges = bilevel.decode_bitimage(canny_bytes)
        bits = edges.to_array()
        # nearest-neighbor scale of the edge map onto the output canvas
        sx = (np.arange(out_w) * edges.width) // out_w
        sy = (np.arange(out_h) * edges.height) // out_h
        scaled = bits[sy][:, sx].astype(bool)
        canvas = canvas.copy()
        canvas[scaled] = params.edge_overlay_value

    sal_bytes = b.section(bundle.TAG_SALIENT)
    if sal_bytes is not None:
        canvas = canvas.copy()
        for region in salient.decode_regions(sal_bytes):
            patch = region.patch_image()
            canvas[region.y : region.y + region.h, region.x : region.x + region.w] = patch.pixels
    return RasterImage(pixels=canvas)
