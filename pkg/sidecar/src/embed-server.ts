#!/usr/bin/env node
/** Embedding server speaking the metrics provider protocol on stdio:
 * request "EMBED <path>\n", response "OK <dim> <v0> <v1> ...\n" or
 * "ERR <message>\n". Single-threaded request loop; one response per line.
 */

import { readFileSync } from "node:fs";
import { createInterface } from "node:readline";
import { EMBED_DIM, embed } from "./embed.js";
import { loadPpm } from "./ppm.js";

export function handleRequest(line: string): string {
  const trimmed = line.trim();
  if (trimmed === "") return "ERR empty request";
  const space = trimmed.indexOf(" ");
  const verb = space < 0 ? trimmed : trimmed.slice(0, space);
  if (verb !== "EMBED" || space < 0) return `ERR unknown request ${verb}`;
  const path = trimmed.slice(space + 1).trim();
  let data: Uint8Array;
  try {
    data = readFileSync(path);
  } catch {
    return `ERR cannot read ${path}`;
  }
  try {
    const v = embed(loadPpm(data));
    const values = Array.from(v, (t) => t.toPrecision(12)).join(" ");
    return `OK ${EMBED_DIM} ${values}`;
  } catch (e) {
    return `ERR ${e instanceof Error ? e.message : String(e)}`;
  }
}

export function serve(): void {
  const rl = createInterface({ input: process.stdin, terminal: false });
  rl.on("line", (line) => {
    process.stdout.write(handleRequest(line) + "\n");
  });
}

if (process.argv[1] && /embed-server\.[cm]?js$/.test(process.argv[1])) {
  serve();
}
