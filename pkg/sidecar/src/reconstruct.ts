/** Bundle → image reconstruction.
 *
 * A backend turns the conditioning inputs (prompt, decoded edge map,
 * upsampled color grid) into a full-size canvas; salient patches are then
 * pasted back bit-exact on top, regardless of what the backend produced.
 *
 * The built-in "composite" backend is deterministic and model-free: the
 * upsampled color grid (mid-gray when absent) with a dark edge overlay.
 * A diffusion pipeline (prompt + edge conditioning + inpainting outside
 * the salient mask, grid-initialized latents) plugs in as another Backend;
 * none ships here because model weights are deployment-specific.
 */

import { decodeBitmap, type BitMap } from "./bilevel.js";
import { decodeGrid, upsampleGrid } from "./colorgrid.js";
import { BackendUnavailable, BundleInvalid } from "./errors.js";
import { TAG_CANNY, TAG_COLORGRID, TAG_SALIENT, prompt, type Bundle } from "./plcb.js";
import type { Raster } from "./ppm.js";
import { decodeRegions, patchRaster } from "./salient.js";

export interface Conditioning {
  prompt: string;
  width: number;
  height: number;
  edges: BitMap | null;
  /** Grid upsampled to output dims, or null for prompt-only bundles. */
  colorCanvas: Uint8Array | null;
}

export interface JobConfig {
  backend: string;
  seed: number;
  steps: number;
}

export const DEFAULT_JOB: JobConfig = { backend: "composite", seed: 0, steps: 20 };

export interface Backend {
  name: string;
  run(cond: Conditioning, config: JobConfig): Raster;
}

const EDGE_OVERLAY_VALUE = 32;

const compositeBackend: Backend = {
  name: "composite",
  run(cond) {
    const { width, height } = cond;
    const pixels = cond.colorCanvas
      ? Uint8Array.from(cond.colorCanvas)
      : new Uint8Array(width * height * 3).fill(128);
    if (cond.edges) {
      const e = cond.edges;
      for (let y = 0; y < height; y++) {
        const sy = Math.floor((y * e.height) / height);
        for (let x = 0; x < width; x++) {
          const sx = Math.floor((x * e.width) / width);
          if (e.bits[sy * e.width + sx]) {
            const o = (y * width + x) * 3;
            pixels[o] = EDGE_OVERLAY_VALUE;
            pixels[o + 1] = EDGE_OVERLAY_VALUE;
            pixels[o + 2] = EDGE_OVERLAY_VALUE;
          }
        }
      }
    }
    return { width, height, pixels };
  },
};

const backends = new Map<string, Backend>([[compositeBackend.name, compositeBackend]]);

export function registerBackend(backend: Backend): void {
  backends.set(backend.name, backend);
}

export function conditioningFrom(bundle: Bundle): Conditioning {
  const width = bundle.originalWidth;
  const height = bundle.originalHeight;
  if (width < 1 || height < 1) throw new BundleInvalid("bundle has degenerate dimensions");
  const cannyBytes = bundle.sections.get(TAG_CANNY);
  const gridBytes = bundle.sections.get(TAG_COLORGRID);
  return {
    prompt: prompt(bundle),
    width,
    height,
    edges: cannyBytes ? decodeBitmap(cannyBytes) : null,
    colorCanvas: gridBytes ? upsampleGrid(decodeGrid(gridBytes), width, height) : null,
  };
}

/** Run a backend, then enforce the salient paste-back guarantee byte-wise. */
export function reconstruct(bundle: Bundle, config: JobConfig = DEFAULT_JOB): Raster {
  const backend = backends.get(config.backend);
  if (!backend) {
    throw new BackendUnavailable(
      `backend "${config.backend}" is not registered (available: ${[...backends.keys()].join(", ")})`,
    );
  }
  const out = backend.run(conditioningFrom(bundle), config);
  if (out.width !== bundle.originalWidth || out.height !== bundle.originalHeight) {
    throw new BundleInvalid("backend produced wrong output dimensions");
  }

  const salBytes = bundle.sections.get(TAG_SALIENT);
  if (salBytes) {
    for (const region of decodeRegions(salBytes)) {
      if (region.x + region.w > out.width || region.y + region.h > out.height) {
        throw new BundleInvalid("salient region exceeds image bounds");
      }
      const patch = patchRaster(region);
      for (let y = 0; y < region.h; y++) {
        out.pixels.set(
          patch.pixels.subarray(y * region.w * 3, (y + 1) * region.w * 3),
          ((region.y + y) * out.width + region.x) * 3,
        );
      }
    }
  }
  return out;
}
