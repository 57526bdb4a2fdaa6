import { describe, expect, it } from "vitest";
import { decodeBitmap } from "../src/bilevel.js";
import { b64, fixtureJson } from "./helpers.js";

interface Case {
  w: number;
  h: number;
  stream: string;
  bits: string;
}

const cases = fixtureJson<Case[]>("bilevel_cases.json");

describe("bi-level decoder", () => {
  it.each(cases.map((c) => [`${c.w}x${c.h}`, c] as const))(
    "decodes the reference-encoded %s stream bit-exactly",
    (_label, c) => {
      const out = decodeBitmap(b64(c.stream));
      expect(out.width).toBe(c.w);
      expect(out.height).toBe(c.h);
      expect(Buffer.from(out.bits)).toEqual(b64(c.bits));
    },
  );

  it("errors on truncation at every payload offset", () => {
    const full = b64(cases[2].stream);
    for (let cut = 9; cut < full.length; cut++) {
      expect(() => decodeBitmap(full.subarray(0, cut))).toThrowError(/exhausted/);
    }
  });

  it("rejects bad headers", () => {
    expect(() => decodeBitmap(Buffer.alloc(4))).toThrowError(/header/);
    const zeroDim = Buffer.alloc(20);
    zeroDim.writeUInt8(1, 8);
    expect(() => decodeBitmap(zeroDim)).toThrowError(/>= 1/);
    const badVersion = b64(cases[0].stream);
    badVersion[8] = 9;
    expect(() => decodeBitmap(badVersion)).toThrowError(/version/);
  });
});
