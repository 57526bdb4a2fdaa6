/** PLCB bundle container parsing.
 *
 * Wire layout (big-endian): magic "PLCB", u16 version = 1, u32 original
 * width, u32 original height, u64 original byte size, u8 section count;
 * then per section u8 tag, u32 payload length, u32 CRC32, payload.
 * Sections arrive in ascending tag order; PROMPT (tag 1) is mandatory.
 */

import * as zlib from "node:zlib";
import { BundleInvalid } from "./errors.js";

export const TAG_PROMPT = 1;
export const TAG_CANNY = 2;
export const TAG_COLORGRID = 3;
export const TAG_SALIENT = 4;
export const TAG_META = 5;

export const TAG_NAMES: Record<number, string> = {
  [TAG_PROMPT]: "PROMPT",
  [TAG_CANNY]: "CANNY",
  [TAG_COLORGRID]: "COLORGRID",
  [TAG_SALIENT]: "SALIENT",
  [TAG_META]: "META",
};

const MAGIC = "PLCB";
const BUNDLE_VERSION = 1;
const HEADER_SIZE = 23;
const SECTION_OVERHEAD = 9;

export interface Bundle {
  originalWidth: number;
  originalHeight: number;
  originalByteSize: number;
  sections: Map<number, Buffer>;
}

export function unpack(data: Buffer): Bundle {
  if (data.length < HEADER_SIZE) throw new BundleInvalid("shorter than bundle header");
  if (data.toString("latin1", 0, 4) !== MAGIC) throw new BundleInvalid("bad magic");
  const version = data.readUInt16BE(4);
  if (version !== BUNDLE_VERSION) throw new BundleInvalid(`unsupported bundle version ${version}`);
  const originalWidth = data.readUInt32BE(6);
  const originalHeight = data.readUInt32BE(10);
  const size64 = data.readBigUInt64BE(14);
  if (size64 > BigInt(Number.MAX_SAFE_INTEGER)) throw new BundleInvalid("original size overflows");
  const count = data.readUInt8(22);

  const sections = new Map<number, Buffer>();
  let pos = HEADER_SIZE;
  let prevTag = -1;
  for (let i = 0; i < count; i++) {
    if (pos + SECTION_OVERHEAD > data.length) throw new BundleInvalid("section header truncated");
    const tag = data.readUInt8(pos);
    const plen = data.readUInt32BE(pos + 1);
    const crc = data.readUInt32BE(pos + 5);
    pos += SECTION_OVERHEAD;
    if (pos + plen > data.length) throw new BundleInvalid(`section tag ${tag} payload truncated`);
    const payload = data.subarray(pos, pos + plen);
    pos += plen;
    if ((zlib.crc32(payload) >>> 0) !== crc) throw new BundleInvalid(`CRC mismatch in section tag ${tag}`);
    if (tag <= prevTag) throw new BundleInvalid("section tags not strictly ascending");
    prevTag = tag;
    sections.set(tag, Buffer.from(payload));
  }
  if (!sections.has(TAG_PROMPT)) throw new BundleInvalid("bundle has no PROMPT section");
  return { originalWidth, originalHeight, originalByteSize: Number(size64), sections };
}

export function prompt(b: Bundle): string {
  return b.sections.get(TAG_PROMPT)!.toString("utf-8");
}
