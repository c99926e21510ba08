import { describe, expect, it } from "vitest";
import { loadCodebook, parseCodebook, column } from "../src/codebook";
import { loadDataset, parseDataset } from "../src/dataset";
import { canonicalize } from "../src/featurize";
import { ensureFixtures } from "./helpers";

const fixtures = ensureFixtures();

describe("dataset parsing", () => {
  it("reads header and rows from a simulator export", () => {
    const ds = loadDataset(fixtures.tiny);
    expect(ds.m).toBe(42);
    expect(ds.n).toBe(96);
    expect(ds.k).toBe(2);
    expect(ds.count).toBe(64);
    expect(ds.snrDb).toBe(Infinity);
    expect(ds.rows).toHaveLength(64);
    expect(ds.rows[0].y).toHaveLength(84);
    const [a, b] = ds.rows[0].support;
    expect(a).toBeGreaterThanOrEqual(0);
    expect(b).toBeGreaterThan(a);
    expect(b).toBeLessThan(96);
  });

  it("rejects a malformed row with its line number", () => {
    const text = "2 4 1 2 0.0 9\n0.1 0.2 0.3 0.4 3\n0.1 0.2 nonsense 0.4 1\n";
    expect(() => parseDataset(text, "bad.txt")).toThrow(/bad\.txt:3/);
  });

  it("rejects a truncated file with the missing row's line number", () => {
    const text = "2 4 1 3 0.0 9\n0.1 0.2 0.3 0.4 3\n";
    expect(() => parseDataset(text, "short.txt")).toThrow(/short\.txt:3/);
  });

  it("rejects out-of-range and unsorted supports", () => {
    expect(() => parseDataset("2 4 1 1 0.0 9\n0 0 0 0 7\n", "x")).toThrow(/outside/);
    expect(() => parseDataset("2 4 2 1 0.0 9\n0 0 0 0 3 1\n", "x")).toThrow(/increasing/);
  });
});

describe("codebook parsing", () => {
  it("loads signs and applies the implied scaling", () => {
    const cb = loadCodebook(fixtures.codebook);
    expect(cb.m).toBe(42);
    expect(cb.n).toBe(96);
    const scale = 1 / Math.sqrt(42);
    for (const value of cb.entries.slice(0, 200)) {
      expect(Math.abs(Math.abs(value) - scale)).toBeLessThan(1e-12);
    }
    // unit column norms
    for (let c = 0; c < cb.n; c += 17) {
      const col = column(cb, c);
      const norm = Math.hypot(...col);
      expect(Math.abs(norm - 1)).toBeLessThan(1e-9);
    }
  });

  it("rejects non-sign entries", () => {
    expect(() => parseCodebook("1 2 0\n+1 2\n", "cb")).toThrow(/\+1 or -1/);
  });
});

describe("canonicalization", () => {
  it("is invariant to a global complex scale", () => {
    const ds = loadDataset(fixtures.tiny);
    const base = canonicalize(ds.rows[0].y);
    const scaled = new Float64Array(ds.rows[0].y.length);
    const [ar, ai] = [0.37, -1.21]; // arbitrary complex factor
    for (let j = 0; j < scaled.length / 2; j++) {
      const re = ds.rows[0].y[2 * j];
      const im = ds.rows[0].y[2 * j + 1];
      scaled[2 * j] = ar * re - ai * im;
      scaled[2 * j + 1] = ar * im + ai * re;
    }
    const rotated = canonicalize(scaled);
    for (let i = 0; i < base.length; i++) {
      expect(Math.abs(rotated[i] - base[i])).toBeLessThan(1e-6);
    }
  });

  it("produces unit norm with the anchor sample on the positive real axis", () => {
    const ds = loadDataset(fixtures.tiny);
    for (const row of ds.rows.slice(0, 8)) {
      const x = canonicalize(row.y);
      let norm2 = 0;
      let best = -1;
      let bestIdx = 0;
      for (let j = 0; j < x.length / 2; j++) {
        const mag = x[2 * j] ** 2 + x[2 * j + 1] ** 2;
        norm2 += mag;
        if (mag > best) {
          best = mag;
          bestIdx = j;
        }
      }
      expect(Math.abs(norm2 - 1)).toBeLessThan(1e-6);
      expect(x[2 * bestIdx]).toBeGreaterThan(0);
      expect(Math.abs(x[2 * bestIdx + 1])).toBeLessThan(1e-6);
    }
  });

  it("maps the zero vector to zeros", () => {
    const x = canonicalize(new Float64Array(10));
    expect(Array.from(x)).toEqual(new Array(10).fill(0));
  });
});
