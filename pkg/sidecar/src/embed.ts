/** Deterministic 384-dim image descriptor for the embedding server.
 *
 * Multi-scale gradient-orientation histogram: 224x224 luma, three octaves
 * (2x2 box downsampled), 4x4 blocks per octave, 8 orientation bins weighted
 * by gradient magnitude; block-wise then global L2 normalization. A deep
 * feature extractor (e.g. VGG16 pooling activations) can replace this by
 * swapping the `embed` function the server wires in — the stdio protocol
 * stays the same.
 */

import type { Raster } from "./ppm.js";

export const EMBED_DIM = 384;

/** BT.601 luma, round half up. */
function toLuma(img: Raster): Float64Array {
  const out = new Float64Array(img.width * img.height);
  for (let i = 0; i < out.length; i++) {
    const r = img.pixels[i * 3];
    const g = img.pixels[i * 3 + 1];
    const b = img.pixels[i * 3 + 2];
    out[i] = Math.floor(0.299 * r + 0.587 * g + 0.114 * b + 0.5);
  }
  return out;
}

function bilinearResize(src: Float64Array, w: number, h: number, outW: number, outH: number): Float64Array {
  const out = new Float64Array(outW * outH);
  for (let y = 0; y < outH; y++) {
    const fy = Math.min(Math.max(((y + 0.5) * h) / outH - 0.5, 0), h - 1);
    const y0 = Math.floor(fy);
    const y1 = Math.min(y0 + 1, h - 1);
    const ty = fy - y0;
    for (let x = 0; x < outW; x++) {
      const fx = Math.min(Math.max(((x + 0.5) * w) / outW - 0.5, 0), w - 1);
      const x0 = Math.floor(fx);
      const x1 = Math.min(x0 + 1, w - 1);
      const tx = fx - x0;
      const top = src[y0 * w + x0] * (1 - tx) + src[y0 * w + x1] * tx;
      const bot = src[y1 * w + x0] * (1 - tx) + src[y1 * w + x1] * tx;
      out[y * outW + x] = top * (1 - ty) + bot * ty;
    }
  }
  return out;
}

const clamp = (v: number, lo: number, hi: number) => (v < lo ? lo : v > hi ? hi : v);

export function embed(img: Raster): Float64Array {
  let level = bilinearResize(toLuma(img), img.width, img.height, 224, 224);
  let n = 224;
  const features: number[] = [];

  for (let octave = 0; octave < 3; octave++) {
    const at = (x: number, y: number) => level[clamp(y, 0, n - 1) * n + clamp(x, 0, n - 1)];
    const step = n / 4;
    const hists: Float64Array[] = Array.from({ length: 16 }, () => new Float64Array(8));
    for (let y = 0; y < n; y++) {
      for (let x = 0; x < n; x++) {
        const gx =
          -at(x - 1, y - 1) + at(x + 1, y - 1) - 2 * at(x - 1, y) + 2 * at(x + 1, y) - at(x - 1, y + 1) + at(x + 1, y + 1);
        const gy =
          -at(x - 1, y - 1) - 2 * at(x, y - 1) - at(x + 1, y - 1) + at(x - 1, y + 1) + 2 * at(x, y + 1) + at(x + 1, y + 1);
        const mag = Math.hypot(gx, gy);
        let deg = (Math.atan2(gy, gx) * 180) / Math.PI;
        deg = ((deg % 360) + 360) % 360;
        const bin = Math.floor(deg / 45) % 8;
        const block = Math.floor(y / step) * 4 + Math.floor(x / step);
        hists[block][bin] += mag;
      }
    }
    for (const hist of hists) {
      const norm = Math.hypot(...hist);
      for (const v of hist) features.push(norm > 0 ? v / norm : v);
    }
    // next octave: 2x2 box downsample
    const half = n / 2;
    const next = new Float64Array(half * half);
    for (let y = 0; y < half; y++) {
      for (let x = 0; x < half; x++) {
        next[y * half + x] =
          (level[2 * y * n + 2 * x] + level[(2 * y + 1) * n + 2 * x] + level[2 * y * n + 2 * x + 1] + level[(2 * y + 1) * n + 2 * x + 1]) / 4;
      }
    }
    level = next;
    n = half;
  }

  const v = Float64Array.from(features);
  let norm = 0;
  for (const t of v) norm += t * t;
  norm = Math.sqrt(norm);
  if (norm === 0) return new Float64Array(EMBED_DIM).fill(1 / Math.sqrt(EMBED_DIM));
  for (let i = 0; i < v.length; i++) v[i] /= norm;
  return v;
}

export function cosine(u: Float64Array, v: Float64Array): number {
  if (u.length !== v.length) throw new Error(`dimension mismatch: ${u.length} vs ${v.length}`);
  let s = 0;
  for (let i = 0; i < u.length; i++) s += u[i] * v[i];
  return s;
}
