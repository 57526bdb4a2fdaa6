#!/usr/bin/env node
/** plc-reconstruct <in.plcb> -o out.png [--seed N] [--steps N] [--backend NAME]
 *
 * Output format follows the extension: .png or .ppm. Exit code 1 on any
 * codec/backend error, with the message on stderr.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { BackendUnavailable, BundleInvalid } from "./errors.js";
import { unpack } from "./plcb.js";
import { savePng } from "./png.js";
import { savePpm } from "./ppm.js";
import { DEFAULT_JOB, reconstruct, type JobConfig } from "./reconstruct.js";

interface Args {
  input: string;
  output: string;
  config: JobConfig;
}

export function parseArgs(argv: string[]): Args {
  let input: string | null = null;
  let output: string | null = null;
  const config = { ...DEFAULT_JOB };
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    const next = () => {
      if (i + 1 >= argv.length) throw new Error(`missing value for ${a}`);
      return argv[++i];
    };
    if (a === "-o" || a === "--output") output = next();
    else if (a === "--seed") config.seed = parseInt(next(), 10);
    else if (a === "--steps") config.steps = parseInt(next(), 10);
    else if (a === "--backend") config.backend = next();
    else if (a.startsWith("-")) throw new Error(`unknown option ${a}`);
    else if (input === null) input = a;
    else throw new Error(`unexpected argument ${a}`);
  }
  if (!input || !output) {
    throw new Error("usage: plc-reconstruct <in.plcb> -o <out.png|out.ppm> [--seed N] [--steps N] [--backend NAME]");
  }
  return { input, output, config };
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (e) {
    process.stderr.write(`${e instanceof Error ? e.message : e}\n`);
    return 1;
  }
  try {
    const bundle = unpack(readFileSync(args.input));
    const img = reconstruct(bundle, args.config);
    const data = args.output.endsWith(".ppm") ? savePpm(img) : savePng(img);
    writeFileSync(args.output, data);
    process.stderr.write(`wrote ${args.output} (${img.width}x${img.height}, ${data.length} bytes)\n`);
    return 0;
  } catch (e) {
    if (e instanceof BundleInvalid || e instanceof BackendUnavailable) {
      process.stderr.write(`${e.name}: ${e.message}\n`);
      return 1;
    }
    if (e instanceof Error && "code" in e) {
      process.stderr.write(`${e.message}\n`);
      return 1;
    }
    throw e;
  }
}

if (process.argv[1] && /cli\.[cm]?js$/.test(process.argv[1])) {
  process.exit(main(process.argv.slice(2)));
}
