/** Color-grid stream decoding and bilinear upsampling.
 *
 * Stream layout (big-endian): u16 grid_w, u16 grid_h, u8 mode. Mode 0: raw
 * RGB888 cells. Mode 1: u8 palette size, RGB888 palette, 4-bit indices
 * packed row-major MSB-first, zero-padded to a byte.
 */

import { BundleInvalid } from "./errors.js";

const MODE_RAW = 0;
const MODE_PALETTE = 1;
const MAX_PALETTE = 16;

export interface ColorGrid {
  gridW: number;
  gridH: number;
  /** (gridH * gridW) RGB cells, row-major. */
  cells: Uint8Array;
}

export function decodeGrid(data: Buffer): ColorGrid {
  if (data.length < 5) throw new BundleInvalid("grid stream shorter than header");
  const gridW = data.readUInt16BE(0);
  const gridH = data.readUInt16BE(2);
  const mode = data.readUInt8(4);
  if (gridW < 1 || gridH < 1) throw new BundleInvalid("grid dimensions must be >= 1");
  const payload = data.subarray(5);
  const n = gridW * gridH;

  if (mode === MODE_RAW) {
    if (payload.length < n * 3) throw new BundleInvalid("raw grid cells truncated");
    return { gridW, gridH, cells: Uint8Array.from(payload.subarray(0, n * 3)) };
  }
  if (mode === MODE_PALETTE) {
    if (payload.length < 1) throw new BundleInvalid("missing palette size");
    const psize = payload[0];
    if (psize < 1 || psize > MAX_PALETTE) throw new BundleInvalid(`palette size ${psize} out of range`);
    const need = 1 + psize * 3 + Math.ceil(n / 2);
    if (payload.length < need) throw new BundleInvalid("palette grid payload truncated");
    const palette = payload.subarray(1, 1 + psize * 3);
    const packed = payload.subarray(1 + psize * 3, need);
    const cells = new Uint8Array(n * 3);
    for (let i = 0; i < n; i++) {
      const nibble = i % 2 === 0 ? packed[i >> 1] >> 4 : packed[i >> 1] & 0x0f;
      if (nibble >= psize) throw new BundleInvalid("palette index out of range");
      cells[i * 3] = palette[nibble * 3];
      cells[i * 3 + 1] = palette[nibble * 3 + 1];
      cells[i * 3 + 2] = palette[nibble * 3 + 2];
    }
    return { gridW, gridH, cells };
  }
  throw new BundleInvalid(`unknown grid mode ${mode}`);
}

const roundHalfUp = (v: number) => Math.floor(v + 0.5);

/** Center of cell i in a floor-partition of [0, length) into `cells` spans. */
function cellCenters(length: number, cells: number): Float64Array {
  const centers = new Float64Array(cells);
  for (let i = 0; i < cells; i++) {
    const a = Math.floor((i * length) / cells);
    const b = Math.floor(((i + 1) * length) / cells);
    centers[i] = (a + b - 1) / 2;
  }
  return centers;
}

interface AxisInterp {
  lo: Int32Array;
  hi: Int32Array;
  t: Float64Array;
}

function axisInterp(outLen: number, cells: number): AxisInterp {
  const centers = cellCenters(outLen, cells);
  const lo = new Int32Array(outLen);
  const hi = new Int32Array(outLen);
  const t = new Float64Array(outLen);
  for (let x = 0; x < outLen; x++) {
    // first center strictly greater than x, clamped to the grid
    let h = 0;
    while (h < cells && centers[h] <= x) h++;
    const l = Math.min(Math.max(h - 1, 0), cells - 1);
    h = Math.min(h, cells - 1);
    const denom = centers[h] - centers[l];
    lo[x] = l;
    hi[x] = h;
    t[x] = denom > 0 ? Math.min(Math.max((x - centers[l]) / denom, 0), 1) : 0;
  }
  return { lo, hi, t };
}

/** Bilinear upsample with cell centers aligned to partition centers. */
export function upsampleGrid(grid: ColorGrid, outW: number, outH: number): Uint8Array {
  const ax = axisInterp(outW, grid.gridW);
  const ay = axisInterp(outH, grid.gridH);
  const out = new Uint8Array(outW * outH * 3);
  const cells = grid.cells;
  for (let y = 0; y < outH; y++) {
    const ylo = ay.lo[y] * grid.gridW;
    const yhi = ay.hi[y] * grid.gridW;
    const ty = ay.t[y];
    for (let x = 0; x < outW; x++) {
      const xlo = ax.lo[x];
      const xhi = ax.hi[x];
      const tx = ax.t[x];
      for (let c = 0; c < 3; c++) {
        const top = cells[(ylo + xlo) * 3 + c] * (1 - tx) + cells[(ylo + xhi) * 3 + c] * tx;
        const bot = cells[(yhi + xlo) * 3 + c] * (1 - tx) + cells[(yhi + xhi) * 3 + c] * tx;
        const v = roundHalfUp(top * (1 - ty) + bot * ty);
        out[(y * outW + x) * 3 + c] = v < 0 ? 0 : v > 255 ? 255 : v;
      }
    }
  }
  return out;
}
