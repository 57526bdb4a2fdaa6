import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import { loadPpm } from "../src/ppm.js";
import { FIXTURES } from "./helpers.js";

const CLI = join(dirname(fileURLToPath(import.meta.url)), "..", "dist", "cli.js");

const run = (args: string[]) =>
  execFileSync(process.execPath, [CLI, ...args], { encoding: "buffer", stdio: ["ignore", "pipe", "pipe"] });

describe("plc-reconstruct CLI", () => {
  it("writes a PNG by default and a PPM by extension", () => {
    const dir = mkdtempSync(join(tmpdir(), "plc-"));
    const png = join(dir, "out.png");
    const ppm = join(dir, "out.ppm");
    run([join(FIXTURES, "salient.plcb"), "-o", png]);
    run([join(FIXTURES, "salient.plcb"), "-o", ppm]);
    expect(readFileSync(png).subarray(0, 8)).toEqual(Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]));
    const img = loadPpm(readFileSync(ppm));
    expect([img.width, img.height]).toEqual([96, 96]);
  });

  it("is byte-deterministic for the same seed", () => {
    const dir = mkdtempSync(join(tmpdir(), "plc-"));
    const a = join(dir, "a.png");
    const b = join(dir, "b.png");
    run([join(FIXTURES, "fullpaste.plcb"), "-o", a, "--seed", "5"]);
    run([join(FIXTURES, "fullpaste.plcb"), "-o", b, "--seed", "5"]);
    expect(readFileSync(a)).toEqual(readFileSync(b));
  });

  it("exits 1 on a missing backend or bad bundle", () => {
    const dir = mkdtempSync(join(tmpdir(), "plc-"));
    expect(() =>
      run([join(FIXTURES, "salient.plcb"), "-o", join(dir, "x.png"), "--backend", "diffusion-sd15"]),
    ).toThrowError(/status 1|failed/);
    expect(() => run([join(FIXTURES, "grid_cases.json"), "-o", join(dir, "y.png")])).toThrowError(/status 1|failed/);
    expect(() => run([])).toThrowError(/status 1|failed/);
  });
});
