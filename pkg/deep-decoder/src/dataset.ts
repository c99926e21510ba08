/**
 * Reader for simulator-exported spread-scheme datasets.
 *
 * File layout: a header line `m n k count snr_db seed`, then one line per
 * example holding 2m reals (interleaved real/imag of the received vector)
 * followed by the k true support indices, space-separated.
 */

import { readFileSync } from "fs";

export interface DatasetRow {
  /** interleaved re/im received samples, length 2m */
  y: Float64Array;
  /** true support, ascending, length k */
  support: number[];
}

export interface SvcDataset {
  m: number;
  n: number;
  k: number;
  count: number;
  snrDb: number;
  seed: number;
  rows: DatasetRow[];
}

function parseFloatStrict(token: string, where: string): number {
  if (token === "inf") return Infinity;
  if (token === "-inf") return -Infinity;
  const value = Number(token);
  if (!Number.isFinite(value)) {
    throw new Error(`${where}: expected a number, got ${JSON.stringify(token)}`);
  }
  return value;
}

function parseIntStrict(token: string, where: string): number {
  const value = Number(token);
  if (!Number.isInteger(value)) {
    throw new Error(`${where}: expected an integer, got ${JSON.stringify(token)}`);
  }
  return value;
}

export function parseDataset(text: string, source = "dataset"): SvcDataset {
  const lines = text.split("\n");
  if (!lines.length || !lines[0].trim()) {
    throw new Error(`${source}:1: missing header line`);
  }
  const header = lines[0].trim().split(/\s+/);
  if (header.length !== 6) {
    throw new Error(`${source}:1: header must have 6 fields, got ${header.length}`);
  }
  const m = parseIntStrict(header[0], `${source}:1`);
  const n = parseIntStrict(header[1], `${source}:1`);
  const k = parseIntStrict(header[2], `${source}:1`);
  const count = parseIntStrict(header[3], `${source}:1`);
  const snrDb = parseFloatStrict(header[4], `${source}:1`);
  const seed = parseIntStrict(header[5], `${source}:1`);
  if (m < 1 || n < 1 || k < 1 || k > n || count < 1) {
    throw new Error(`${source}:1: inconsistent header dimensions`);
  }

  const rows: DatasetRow[] = [];
  for (let i = 0; i < count; i++) {
    const lineNo = i + 2;
    const line = lines[i + 1];
    if (line === undefined || !line.trim()) {
      throw new Error(`${source}:${lineNo}: expected ${count} data rows, file ends early`);
    }
    const fields = line.trim().split(/\s+/);
    if (fields.length !== 2 * m + k) {
      throw new Error(
        `${source}:${lineNo}: expected ${2 * m + k} fields, got ${fields.length}`,
      );
    }
    const y = new Float64Array(2 * m);
    for (let j = 0; j < 2 * m; j++) {
      y[j] = parseFloatStrict(fields[j], `${source}:${lineNo}`);
    }
    const support: number[] = [];
    for (let j = 0; j < k; j++) {
      const idx = parseIntStrict(fields[2 * m + j], `${source}:${lineNo}`);
      if (idx < 0 || idx >= n) {
        throw new Error(`${source}:${lineNo}: support index ${idx} outside [0, ${n})`);
      }
      if (j > 0 && idx <= support[j - 1]) {
        throw new Error(`${source}:${lineNo}: support indices must be strictly increasing`);
      }
      support.push(idx);
    }
    rows.push({ y, support });
  }
  return { m, n, k, count, snrDb, seed, rows };
}

export function loadDataset(path: string): SvcDataset {
  return parseDataset(readFileSync(path, "ascii"), path);
}
