/** Binary PPM (P6, maxval 255) reader/writer — the patch and image format. */

import { BundleInvalid } from "./errors.js";

export interface Raster {
  width: number;
  height: number;
  /** Row-major RGB, 3 bytes per pixel. */
  pixels: Uint8Array;
}

const isSpace = (b: number) => b === 0x20 || b === 0x09 || b === 0x0a || b === 0x0d || b === 0x0b || b === 0x0c;

/** Parse a P6 stream; header tolerates whitespace runs and # comments. */
export function loadPpm(data: Uint8Array): Raster {
  let pos = 0;
  const token = (): string => {
    for (;;) {
      while (pos < data.length && isSpace(data[pos])) pos++;
      if (pos < data.length && data[pos] === 0x23) {
        while (pos < data.length && data[pos] !== 0x0a) pos++;
        continue;
      }
      break;
    }
    const start = pos;
    while (pos < data.length && !isSpace(data[pos]) && data[pos] !== 0x23) pos++;
    if (pos === start) throw new BundleInvalid("truncated PPM header");
    return Buffer.from(data.subarray(start, pos)).toString("latin1");
  };

  if (token() !== "P6") throw new BundleInvalid("not a P6 PPM stream");
  const width = parseInt(token(), 10);
  const height = parseInt(token(), 10);
  const maxval = parseInt(token(), 10);
  if (!(width >= 1) || !(height >= 1)) throw new BundleInvalid("bad PPM dimensions");
  if (maxval !== 255) throw new BundleInvalid(`unsupported maxval ${maxval}`);
  pos++; // single whitespace byte after maxval
  const need = width * height * 3;
  if (data.length - pos < need) throw new BundleInvalid("PPM pixel data truncated");
  return { width, height, pixels: data.slice(pos, pos + need) };
}

/** Canonical form: "P6\n{w} {h}\n255\n" + pixels. */
export function savePpm(img: Raster): Buffer {
  const header = Buffer.from(`P6\n${img.width} ${img.height}\n255\n`, "latin1");
  return Buffer.concat([header, img.pixels]);
}
