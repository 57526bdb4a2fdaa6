export { BackendUnavailable, BundleInvalid } from "./errors.js";
export { TAG_CANNY, TAG_COLORGRID, TAG_META, TAG_PROMPT, TAG_SALIENT, prompt, unpack, type Bundle } from "./plcb.js";
export { decodeBitmap, type BitMap } from "./bilevel.js";
export { decodeGrid, upsampleGrid, type ColorGrid } from "./colorgrid.js";
export { decodeRegions, patchRaster, type SalientRegion } from "./salient.js";
export { loadPpm, savePpm, type Raster } from "./ppm.js";
export { savePng } from "./png.js";
export {
  DEFAULT_JOB,
  conditioningFrom,
  reconstruct,
  registerBackend,
  type Backend,
  type Conditioning,
  type JobConfig,
} from "./reconstruct.js";
export { EMBED_DIM, cosine, embed } from "./embed.js";
