/**
 * Reader for the simulator's spreading-codebook export: a header `m n seed`
 * followed by m rows of n signs (+1/-1); the 1/sqrt(m) column scaling is
 * implied by the format and applied on load.
 */

import { readFileSync } from "fs";

export interface Codebook {
  m: number;
  n: number;
  seed: number;
  /** row-major m x n entries, each +-1/sqrt(m); columns have unit norm */
  entries: Float64Array;
}

export function parseCodebook(text: string, source = "codebook"): Codebook {
  const lines = text.split("\n");
  const header = (lines[0] ?? "").trim().split(/\s+/);
  if (header.length !== 3) {
    throw new Error(`${source}:1: header must be "m n seed"`);
  }
  const [m, n, seed] = header.map(Number);
  if (!Number.isInteger(m) || !Number.isInteger(n) || m < 1 || n < 1) {
    throw new Error(`${source}:1: bad dimensions ${header.join(" ")}`);
  }
  const scale = 1 / Math.sqrt(m);
  const entries = new Float64Array(m * n);
  for (let r = 0; r < m; r++) {
    const line = lines[r + 1];
    if (line === undefined || !line.trim()) {
      throw new Error(`${source}:${r + 2}: expected ${m} sign rows, file ends early`);
    }
    const fields = line.trim().split(/\s+/);
    if (fields.length !== n) {
      throw new Error(`${source}:${r + 2}: expected ${n} signs, got ${fields.length}`);
    }
    for (let c = 0; c < n; c++) {
      const sign = Number(fields[c]);
      if (sign !== 1 && sign !== -1) {
        throw new Error(`${source}:${r + 2}: entries must be +1 or -1, got ${fields[c]}`);
      }
      entries[r * n + c] = sign * scale;
    }
  }
  return { m, n, seed, entries };
}

export function loadCodebook(path: string): Codebook {
  return parseCodebook(readFileSync(path, "ascii"), path);
}

/** column c as a dense vector of length m */
export function column(codebook: Codebook, c: number): Float64Array {
  const out = new Float64Array(codebook.m);
  for (let r = 0; r < codebook.m; r++) out[r] = codebook.entries[r * codebook.n + c];
  return out;
}
