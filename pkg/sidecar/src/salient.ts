/** SALIENT section decoding: verbatim patches with placement rectangles.
 *
 * Layout (big-endian): u16 region count, then per region u32 x, u32 y,
 * u32 w, u32 h, u8 patch format (0 = P6 PPM), u32 patch length, patch.
 */

import { BundleInvalid } from "./errors.js";
import { loadPpm, type Raster } from "./ppm.js";

export const PATCH_FORMAT_PPM = 0;

export interface SalientRegion {
  x: number;
  y: number;
  w: number;
  h: number;
  patchFormat: number;
  patch: Buffer;
}

export function decodeRegions(data: Buffer): SalientRegion[] {
  if (data.length < 2) throw new BundleInvalid("salient section shorter than count field");
  const count = data.readUInt16BE(0);
  let pos = 2;
  const regions: SalientRegion[] = [];
  for (let i = 0; i < count; i++) {
    if (pos + 21 > data.length) throw new BundleInvalid("salient region header truncated");
    const x = data.readUInt32BE(pos);
    const y = data.readUInt32BE(pos + 4);
    const w = data.readUInt32BE(pos + 8);
    const h = data.readUInt32BE(pos + 12);
    const patchFormat = data.readUInt8(pos + 16);
    const plen = data.readUInt32BE(pos + 17);
    pos += 21;
    if (pos + plen > data.length) throw new BundleInvalid("salient patch truncated");
    regions.push({ x, y, w, h, patchFormat, patch: Buffer.from(data.subarray(pos, pos + plen)) });
    pos += plen;
  }
  return regions;
}

export function patchRaster(region: SalientRegion): Raster {
  if (region.patchFormat !== PATCH_FORMAT_PPM) {
    throw new BundleInvalid(`unknown patch format ${region.patchFormat}`);
  }
  const img = loadPpm(region.patch);
  if (img.width !== region.w || img.height !== region.h) {
    throw new BundleInvalid("patch dimensions disagree with region extent");
  }
  return img;
}
