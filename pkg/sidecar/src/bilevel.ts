/** Decoder for the bi-level edge-map stream inside CANNY sections.
 *
 * Stream layout (big-endian): u32 width, u32 height, u8 version = 1, then
 * an adaptive binary range-coded payload. Each pixel's probability comes
 * from a 10-bit context of previously decoded neighbors (two rows above,
 * two pixels left); per-context 1-initialized counts rescale past 1024.
 * All arithmetic stays below 2^41 so plain doubles are exact.
 */

import { BundleInvalid } from "./errors.js";

const STREAM_VERSION = 1;
const COUNT_LIMIT = 1024;
const TOP = 1 << 24;
const NUM_CONTEXTS = 1024;

// (dx, dy) context template offsets, MSB first.
const CTX_OFFSETS: ReadonlyArray<readonly [number, number]> = [
  [-1, -2], [0, -2], [1, -2],
  [-2, -1], [-1, -1], [0, -1], [1, -1], [2, -1],
  [-2, 0], [-1, 0],
];

export interface BitMap {
  width: number;
  height: number;
  /** One byte per pixel, 0 or 1, row-major. */
  bits: Uint8Array;
}

export function decodeBitmap(data: Buffer): BitMap {
  if (data.length < 9) throw new BundleInvalid("bi-level stream shorter than header");
  const width = data.readUInt32BE(0);
  const height = data.readUInt32BE(4);
  const version = data.readUInt8(8);
  if (version !== STREAM_VERSION) throw new BundleInvalid(`bi-level stream version ${version}`);
  if (width < 1 || height < 1) throw new BundleInvalid("bi-level dimensions must be >= 1");

  const payload = data.subarray(9);
  let pos = 0;
  const nextByte = (): number => {
    if (pos >= payload.length) throw new BundleInvalid("bi-level payload exhausted");
    return payload[pos++];
  };

  const c0 = new Int32Array(NUM_CONTEXTS).fill(1);
  const c1 = new Int32Array(NUM_CONTEXTS).fill(1);
  const bits = new Uint8Array(width * height);

  nextByte(); // leading byte from the encoder's initial cache
  let code = 0;
  for (let i = 0; i < 4; i++) code = code * 256 + nextByte();
  let range = 0xffffffff;

  for (let y = 0; y < height; y++) {
    for (let x = 0; x < width; x++) {
      let ctx = 0;
      for (const [dx, dy] of CTX_OFFSETS) {
        const nx = x + dx;
        const ny = y + dy;
        const b = nx >= 0 && nx < width && ny >= 0 && ny < height ? bits[ny * width + nx] : 0;
        ctx = (ctx << 1) | b;
      }
      const total = c0[ctx] + c1[ctx];
      let split = Math.floor(range / total) * c1[ctx];
      if (split < 1) split = 1;
      if (code < split) {
        bits[y * width + x] = 1;
        range = split;
        c1[ctx]++;
      } else {
        code -= split;
        range -= split;
        c0[ctx]++;
      }
      if (c0[ctx] + c1[ctx] > COUNT_LIMIT) {
        c0[ctx] = (c0[ctx] + 1) >> 1;
        c1[ctx] = (c1[ctx] + 1) >> 1;
      }
      while (range < TOP) {
        code = code * 256 + nextByte();
        range *= 256;
      }
    }
  }
  return { width, height, bits };
}
