"""Perceptual similarity metrics: windowed SSIM and embedding cosine similarity.

The built-in embedder is a deterministic multi-scale gradient-orientation
histogram (384-dim, non-negative, unit norm). A deep-feature provider can be
plugged in over a line protocol: request "EMBED <path>\\n", response
"OK <dim> <v0> <v1> ...\\n" or "ERR <message>\\n" on the provider's stdio.
"""

from __future__ import annotations

import shlex
import subprocess
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ImageTooSmall, ProviderUnavailable
from .raster import RasterImage, load_ppm, to_luma

EMBED_DIM = 384


@dataclass(frozen=True)
class SsimParams:
    window: int = 8
    c1: float = (0.01 * 255) ** 2
    c2: float = (0.03 * 255) ** 2


def _window_means(a: np.ndarray, win: int) -> np.ndarray:
    """Mean of every win x win window (stride 1, fully inside) via cumsum."""
    c = np.cumsum(np.cumsum(a, axis=0), axis=1)
    c = np.pad(c, ((1, 0), (1, 0)))
    s = c[win:, win:] - c[:-win, win:] - c[win:, :-win] + c[:-win, :-win]
    return s / (win * win)


def ssim(a: RasterImage, b: RasterImage, params: SsimParams = SsimParams()) -> float:
    """Mean SSIM over uniform 8x8 windows, computed on luma."""
    if a.width != b.width or a.height != b.height:
        raise DimensionMismatch(f"{a.width}x{a.height} vs {b.width}x{b.height}")
    win = params.window
    if a.width < win or a.height < win:
        raise ImageTooSmall(f"need at least {win}x{win}")
    x = to_luma(a).samples.astype(np.float64)
    y = to_luma(b).samples.astype(np.float64)
    mx = _window_means(x, win)
    my = _window_means(y, win)
    sxx = _window_means(x * x, win) - mx * mx
    syy = _window_means(y * y, win) - my * my
    sxy = _window_means(x * y, win) - mx * my
    c1, c2 = params.c1, params.c2
    num = (2 * mx * my + c1) * (2 * sxy + c2)
    den = (mx * mx + my * my + c1) * (sxx + syy + c2)
    return float((num / den).mean())


def _bilinear_resize(a: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    h, w = a.shape
    ys = np.clip((np.arange(out_h) + 0.5) * h / out_h - 0.5, 0, h - 1)
    xs = np.clip((np.arange(out_w) + 0.5) * w / out_w - 0.5, 0, w - 1)
    y0 = np.floor(ys).astype(int)
    x0 = np.floor(xs).astype(int)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    ty = (ys - y0)[:, None]
    tx = (xs - x0)[None, :]
    top = a[y0][:, x0] * (1 - tx) + a[y0][:, x1] * tx
    bot = a[y1][:, x0] * (1 - tx) + a[y1][:, x1] * tx
    return top * (1 - ty) + bot * ty


def _sobel_float(a: np.ndarray):
    def sh(dx, dy):
        idx = np.clip(np.arange(a.shape[1]) + dx, 0, a.shape[1] - 1)
        idy = np.clip(np.arange(a.shape[0]) + dy, 0, a.shape[0] - 1)
        return a[idy][:, idx]

    gx = -sh(-1, -1) + sh(1, -1) - 2 * sh(-1, 0) + 2 * sh(1, 0) - sh(-1, 1) + sh(1, 1)
    gy = -sh(-1, -1) - 2 * sh(0, -1) - sh(1, -1) + sh(-1, 1) + 2 * sh(0, 1) + sh(1, 1)
    return gx, gy


def embed_builtin(image: RasterImage) -> np.ndarray:
    """384-dim multi-scale gradient-orientation descriptor, unit L2 norm.

    224x224 luma, three octaves (224/112/56), 4x4 blocks per octave, 8
    orientation bins weighted by gradient magnitude; block-wise then global
    L2 normalization. Uniform images fall back to the constant unit vector.
    """
    luma = to_luma(image).samples.astype(np.float64)
    level = _bilinear_resize(luma, 224, 224)
    features = []
    for _ in range(3):
        gx, gy = _sobel_float(level)
        mag = np.hypot(gx, gy)
        deg = np.degrees(np.arctan2(gy, gx)) % 360.0
        bins = (np.floor(deg / 45.0).astype(int)) % 8
        n = level.shape[0]
        step = n // 4
        for by in range(4):
            for bx in range(4):
                sl = (slice(by * step, (by + 1) * step), slice(bx * step, (bx + 1) * step))
                hist = np.bincount(bins[sl].ravel(), weights=mag[sl].ravel(), minlength=8)
                norm = np.linalg.norm(hist)
                features.append(hist / norm if norm > 0 else hist)
        # next octave: 2x2 box downsample
        level = (level[0::2, 0::2] + level[1::2, 0::2] + level[0::2, 1::2] + level[1::2, 1::2]) / 4.0
    v = np.concatenate(features)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        return np.full(EMBED_DIM, 1.0 / np.sqrt(EMBED_DIM))
    return v / norm


def cosine_similarity(u: np.ndarray, v: np.ndarray) -> float:
    if u.shape != v.shape:
        raise DimensionMismatch(f"{u.shape} vs {v.shape}")
    return float(np.dot(u, v))


class BuiltinHistogramEmbedder:
    """Default provider: deterministic, dependency-free."""

    dim = EMBED_DIM

    def embed(self, image: RasterImage) -> np.ndarray:
        return embed_builtin(image)

    def embed_path(self, path) -> np.ndarray:
        return embed_builtin(load_ppm(open(path, "rb").read()))

    def close(self):
        pass


class ExternalEmbeddingProvider:
    """Talks the EMBED line protocol to a spawned provider process."""

    def __init__(self, command: str):
        try:
            self._proc = subprocess.Popen(
                shlex.split(command),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        except OSError as e:
            raise ProviderUnavailable(f"cannot start provider {command!r}: {e}") from e

    def embed_path(self, path) -> np.ndarray:
        if self._proc.poll() is not None:
            raise ProviderUnavailable("provider process has exited")
        self._proc.stdin.write(f"EMBED {path}\n")
        self._proc.stdin.flush()
        line = self._proc.stdout.readline()
        if not line:
            raise ProviderUnavailable("provider closed its output")
        parts = line.split()
        if parts[0] == "ERR" or len(parts) < 2:
            raise ProviderUnavailable(f"provider error: {line.strip()}")
        if parts[0] != "OK":
            raise ProviderUnavailable(f"malformed provider response: {line.strip()}")
        dim = int(parts[1])
        values = np.array([float(t) for t in parts[2:]], dtype=np.float64)
        if len(values) != dim:
            raise ProviderUnavailable(f"provider promised {dim} values, sent {len(values)}")
        return values

    def close(self):
        if self._proc.poll() is None:
            self._proc.stdin.close()
            self._proc.wait(timeout=10)
