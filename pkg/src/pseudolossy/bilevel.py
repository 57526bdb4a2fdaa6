"""Lossless bi-level compression: context modeling + adaptive range coding.

JBIG2-inspired generic-region coder: each pixel's probability is predicted
from 10 previously coded neighbor bits (two rows above, two pixels to the
left), feeding a byte-oriented binary range coder with count-based adaptive
contexts. Not wire-compatible with standard JBIG2; the stream is fully pinned
here for cross-implementation reproducibility.

Stream layout (big-endian): u32 width, u32 height, u8 version = 1, payload.

Two interchangeable cores exist: a pure-Python one (the reference) and a
numba-compiled one used by default when numba imports. Both must produce
identical bytes; a test cross-checks them.
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import BadHeader, TruncatedStream, UnsupportedVersion
from .raster import BitImage

STREAM_VERSION = 1
_HEADER = struct.Struct(">IIB")

# Context template offsets (dx, dy), MSB first.
_CTX_OFFSETS = (
    (-1, -2), (0, -2), (1, -2),
    (-2, -1), (-1, -1), (0, -1), (1, -1), (2, -1),
    (-2, 0), (-1, 0),
)

_NUM_CONTEXTS = 1 << len(_CTX_OFFSETS)
_COUNT_LIMIT = 1024
_TOP = 1 << 24  # renormalize below this range


def _encode_core_py(bits: np.ndarray) -> bytes:
    h, w = bits.shape
    c0 = [1] * _NUM_CONTEXTS
    c1 = [1] * _NUM_CONTEXTS
    low = 0
    rng = 0xFFFFFFFF
    cache = 0
    cache_size = 1
    out = bytearray()

    def shift_low():
        nonlocal low, cache, cache_size
        if low < 0xFF000000 or low > 0xFFFFFFFF:
            carry = low >> 32
            out.append((cache + carry) & 0xFF)
            for _ in range(cache_size - 1):
                out.append((0xFF + carry) & 0xFF)
            cache_size = 0
            cache = (low >> 24) & 0xFF
        cache_size += 1
        low = (low & 0x00FFFFFF) << 8

    for y in range(h):
        for x in range(w):
            ctx = 0
            for dx, dy in _CTX_OFFSETS:
                nx, ny = x + dx, y + dy
                b = bits[ny, nx] if 0 <= nx < w and 0 <= ny < h else 0
                ctx = (ctx << 1) | int(b)
            total = c0[ctx] + c1[ctx]
            split = (rng // total) * c1[ctx]
            if split < 1:
                split = 1
            bit = int(bits[y, x])
            if bit:
                rng = split
                c1[ctx] += 1
            else:
                low += split
                rng -= split
                c0[ctx] += 1
            if c0[ctx] + c1[ctx] > _COUNT_LIMIT:
                c0[ctx] = (c0[ctx] + 1) // 2
                c1[ctx] = (c1[ctx] + 1) // 2
            while rng < _TOP:
                shift_low()
                rng <<= 8
    for _ in range(5):
        shift_low()
    return bytes(out)


def _decode_core_py(payload: bytes, w: int, h: int) -> np.ndarray:
    c0 = [1] * _NUM_CONTEXTS
    c1 = [1] * _NUM_CONTEXTS
    pos = 0
    n = len(payload)

    def next_byte():
        nonlocal pos
        if pos >= n:
            raise TruncatedStream("payload exhausted")
        b = payload[pos]
        pos += 1
        return b

    next_byte()  # leading byte emitted by the initial encoder cache
    code = 0
    for _ in range(4):
        code = (code << 8) | next_byte()
    rng = 0xFFFFFFFF
    bits = np.zeros((h, w), dtype=np.uint8)
    for y in range(h):
        for x in range(w):
            ctx = 0
            for dx, dy in _CTX_OFFSETS:
                nx, ny = x + dx, y + dy
                b = bits[ny, nx] if 0 <= nx < w and 0 <= ny < h else 0
                ctx = (ctx << 1) | int(b)
            total = c0[ctx] + c1[ctx]
            split = (rng // total) * c1[ctx]
            if split < 1:
                split = 1
            if code < split:
                bits[y, x] = 1
                rng = split
                c1[ctx] += 1
            else:
                code -= split
                rng -= split
                c0[ctx] += 1
            if c0[ctx] + c1[ctx] > _COUNT_LIMIT:
                c0[ctx] = (c0[ctx] + 1) // 2
                c1[ctx] = (c1[ctx] + 1) // 2
            while rng < _TOP:
                code = (code << 8) | next_byte()
                rng <<= 8
    return bits


# --- numba fast path -------------------------------------------------------

def _build_numba_cores():
    import numba

    offs = np.array(_CTX_OFFSETS, dtype=np.int64)

    @numba.njit(cache=True)
    def enc(bits):
        h, w = bits.shape
        c0 = np.ones(_NUM_CONTEXTS, dtype=np.int64)
        c1 = np.ones(_NUM_CONTEXTS, dtype=np.int64)
        out = np.zeros(h * w * 2 + 64, dtype=np.uint8)
        npos = 0
        low = np.int64(0)
        rng = np.int64(0xFFFFFFFF)
        cache = np.int64(0)
        cache_size = np.int64(1)
        for y in range(h):
            for x in range(w):
                ctx = 0
                for k in range(offs.shape[0]):
                    nx = x + offs[k, 0]
                    ny = y + offs[k, 1]
                    b = 0
                    if 0 <= nx < w and 0 <= ny < h:
                        b = bits[ny, nx]
                    ctx = (ctx << 1) | b
                total = c0[ctx] + c1[ctx]
                split = (rng // total) * c1[ctx]
                if split < 1:
                    split = 1
                if bits[y, x]:
                    rng = split
                    c1[ctx] += 1
                else:
                    low += split
                    rng -= split
                    c0[ctx] += 1
                if c0[ctx] + c1[ctx] > _COUNT_LIMIT:
                    c0[ctx] = (c0[ctx] + 1) // 2
                    c1[ctx] = (c1[ctx] + 1) // 2
                while rng < _TOP:
                    if low < 0xFF000000 or low > 0xFFFFFFFF:
                        carry = low >> 32
                        out[npos] = (cache + carry) & 0xFF
                        npos += 1
                        for _ in range(cache_size - 1):
                            out[npos] = (0xFF + carry) & 0xFF
                            npos += 1
                        cache_size = 0
                        cache = (low >> 24) & 0xFF
                    cache_size += 1
                    low = (low & 0x00FFFFFF) << 8
                    rng <<= 8
        for _ in range(5):
            if low < 0xFF000000 or low > 0xFFFFFFFF:
                carry = low >> 32
                out[npos] = (cache + carry) & 0xFF
                npos += 1
                for _ in range(cache_size - 1):
                    out[npos] = (0xFF + carry) & 0xFF
                    npos += 1
                cache_size = 0
                cache = (low >> 24) & 0xFF
            cache_size += 1
            low = (low & 0x00FFFFFF) << 8
        return out[:npos]

    @numba.njit(cache=True)
    def dec(payload, w, h):
        bits = np.zeros((h, w), dtype=np.uint8)
        c0 = np.ones(_NUM_CONTEXTS, dtype=np.int64)
        c1 = np.ones(_NUM_CONTEXTS, dtype=np.int64)
        n = payload.shape[0]
        pos = np.int64(1)  # skip leading cache byte
        if n < 5:
            return bits, False
        code = np.int64(0)
        for _ in range(4):
            code = (code << 8) | payload[pos]
            pos += 1
        rng = np.int64(0xFFFFFFFF)
        for y in range(h):
            for x in range(w):
                ctx = 0
                for k in range(offs.shape[0]):
                    nx = x + offs[k, 0]
                    ny = y + offs[k, 1]
                    b = 0
                    if 0 <= nx < w and 0 <= ny < h:
                        b = bits[ny, nx]
                    ctx = (ctx << 1) | b
                total = c0[ctx] + c1[ctx]
                split = (rng // total) * c1[ctx]
                if split < 1:
                    split = 1
                if code < split:
                    bits[y, x] = 1
                    rng = split
                    c1[ctx] += 1
                else:
                    code -= split
                    rng -= split
                    c0[ctx] += 1
                if c0[ctx] + c1[ctx] > _COUNT_LIMIT:
                    c0[ctx] = (c0[ctx] + 1) // 2
                    c1[ctx] = (c1[ctx] + 1) // 2
                while rng < _TOP:
                    if pos >= n:
                        return bits, False
                    code = (code << 8) | payload[pos]
                    pos += 1
                    rng <<= 8
        return bits, True

    return enc, dec


try:
    _enc_fast, _dec_fast = _build_numba_cores()
except ImportError:  # pragma: no cover - numba is an optional speedup
    _enc_fast = _dec_fast = None


def encode_bitimage(image: BitImage, use_fast: bool = True) -> bytes:
    """Compress a BitImage; deterministic, losslessly invertible."""
    header = _HEADER.pack(image.width, image.height, STREAM_VERSION)
    bits = image.to_array()
    if use_fast and _enc_fast is not None:
        payload = _enc_fast(bits).tobytes()
    else:
        payload = _encode_core_py(bits)
    return header + payload


def decode_bitimage(data: bytes, use_fast: bool = True) -> BitImage:
    """Exact inverse of encode_bitimage."""
    if len(data) < _HEADER.size:
        raise BadHeader(f"stream shorter than {_HEADER.size}-byte header")
    w, h, version = _HEADER.unpack_from(data)
    if version != STREAM_VERSION:
        raise UnsupportedVersion(f"version {version}, expected {STREAM_VERSION}")
    if w < 1 or h < 1:
        raise BadHeader("dimensions must be >= 1")
    payload = data[_HEADER.size:]
    if use_fast and _dec_fast is not None:
        bits, ok = _dec_fast(np.frombuffer(payload, dtype=np.uint8), w, h)
        if not ok:
            raise TruncatedStream("payload exhausted")
    else:
        bits = _decode_core_py(payload, w, h)
    return BitImage.from_array(bits)
