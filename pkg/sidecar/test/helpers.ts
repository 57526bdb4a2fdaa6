import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

export const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");
export const REPO_ROOT = join(dirname(fileURLToPath(import.meta.url)), "..", "..");

export const fixture = (name: string): Buffer => readFileSync(join(FIXTURES, name));

export const fixtureJson = <T>(name: string): T => JSON.parse(fixture(name).toString("utf-8")) as T;

export const b64 = (s: string): Buffer => Buffer.from(s, "base64");
