"""The PLCB container: what actually crosses the wire, plus savings accounting.

Wire layout (big-endian):
  magic "PLCB" (4) | u16 version = 1 | u32 original_width | u32 original_height
  | u64 original_byte_size | u8 section_count
then per section: u8 tag | u32 payload_len | u32 crc32(payload) | payload.

Sections are stored in ascending tag order, at most one per tag; the PROMPT
section is mandatory. Savings are measured against the source file's on-disk
byte size, which travels inside the bundle so reports can be audited without
the original.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass, field

from .errors import (
    BadMagic,
    CrcMismatch,
    DuplicateTag,
    MissingPrompt,
    Truncated,
    UnsupportedVersion,
)

MAGIC = b"PLCB"
BUNDLE_VERSION = 1
HEADER_SIZE = 23
SECTION_OVERHEAD = 9

TAG_PROMPT = 1
TAG_CANNY = 2
TAG_COLORGRID = 3
TAG_SALIENT = 4
TAG_META = 5

TAG_NAMES = {
    TAG_PROMPT: "PROMPT",
    TAG_CANNY: "CANNY",
    TAG_COLORGRID: "COLORGRID",
    TAG_SALIENT: "SALIENT",
    TAG_META: "META",
}

_HEADER = struct.Struct(">4sHIIQB")
_SECTION = struct.Struct(">BII")


@dataclass(frozen=True)
class Bundle:
    original_width: int
    original_height: int
    original_byte_size: int
    sections: tuple  # ordered (tag, payload) pairs

    def __post_init__(self):
        secs = tuple((int(t), bytes(p)) for t, p in self.sections)
        tags = [t for t, _ in secs]
        if len(set(tags)) != len(tags):
            raise DuplicateTag(f"duplicate section tags in {tags}")
        if TAG_PROMPT not in tags:
            raise MissingPrompt("every bundle must carry a PROMPT section")
        object.__setattr__(self, "sections", tuple(sorted(secs)))

    def section(self, tag: int) -> bytes | None:
        for t, payload in self.sections:
            if t == tag:
                return payload
        return None

    @property
    def prompt(self) -> str:
        return self.section(TAG_PROMPT).decode("utf-8")


@dataclass(frozen=True)
class SavingsReport:
    bundle_bytes: int
    original_bytes: int
    savings: float
    per_section_bytes: dict = field(default_factory=dict)
    below_break_even: bool = False


def pack(bundle: Bundle) -> bytes:
    out = bytearray(
        _HEADER.pack(
            MAGIC,
            BUNDLE_VERSION,
            bundle.original_width,
            bundle.original_height,
            bundle.original_byte_size,
            len(bundle.sections),
        )
    )
    for tag, payload in bundle.sections:
        out += _SECTION.pack(tag, len(payload), zlib.crc32(payload) & 0xFFFFFFFF)
        out += payload
    return bytes(out)


def unpack(data: bytes) -> Bundle:
    if len(data) < HEADER_SIZE:
        raise Truncated("shorter than bundle header")
    magic, version, ow, oh, osize, count = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise BadMagic(f"bad magic {magic!r}")
    if version != BUNDLE_VERSION:
        raise UnsupportedVersion(f"bundle version {version}")
    pos = HEADER_SIZE
    sections = []
    for _ in range(count):
        if pos + SECTION_OVERHEAD > len(data):
            raise Truncated("section header truncated")
        tag, plen, crc = _SECTION.unpack_from(data, pos)
        pos += SECTION_OVERHEAD
        if pos + plen > len(data):
            raise Truncated(f"section tag {tag} payload truncated")
        payload = data[pos : pos + plen]
        pos += plen
        if (zlib.crc32(payload) & 0xFFFFFFFF) != crc:
            raise CrcMismatch(tag)
        sections.append((tag, payload))
    return Bundle(
        original_width=ow,
        original_height=oh,
        original_byte_size=osize,
        sections=tuple(sections),
    )


def packed_size(bundle: Bundle) -> int:
    return HEADER_SIZE + sum(SECTION_OVERHEAD + len(p) for _, p in bundle.sections)


def savings_report(bundle: Bundle) -> SavingsReport:
    if bundle.original_byte_size <= 0:
        raise ValueError("original_byte_size must be > 0")
    total = packed_size(bundle)
    savings = 1.0 - total / bundle.original_byte_size
    return SavingsReport(
        bundle_bytes=total,
        original_bytes=bundle.original_byte_size,
        savings=savings,
        per_section_bytes={t: len(p) for t, p in bundle.sections},
        below_break_even=savings <= 0.0,
    )
