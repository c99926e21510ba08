/**
 * Input featurization for the support decoder.
 *
 * Support information is invariant to the complex scalar riding on the whole
 * received vector (channel gain and phase), so before a vector enters the
 * network it is canonicalized: scaled to unit norm and rotated so the
 * largest-magnitude sample lands on the positive real axis (ties toward the
 * lower sample index).  The network still consumes the full 2m interleaved
 * real/imag values.
 */

export function canonicalize(y: Float64Array, out?: Float32Array): Float32Array {
  const m = y.length / 2;
  const result = out ?? new Float32Array(y.length);
  let jmax = 0;
  let best = -1;
  let norm2 = 0;
  for (let j = 0; j < m; j++) {
    const re = y[2 * j];
    const im = y[2 * j + 1];
    const mag = re * re + im * im;
    norm2 += mag;
    if (mag > best) {
      best = mag;
      jmax = j;
    }
  }
  if (norm2 === 0) {
    result.fill(0);
    return result;
  }
  const gr = y[2 * jmax];
  const gi = y[2 * jmax + 1];
  const gmag = Math.sqrt(gr * gr + gi * gi);
  const cr = gr / gmag; // conj(phase of the anchor sample)
  const ci = -gi / gmag;
  const scale = 1 / Math.sqrt(norm2);
  for (let j = 0; j < m; j++) {
    const re = y[2 * j];
    const im = y[2 * j + 1];
    result[2 * j] = scale * (re * cr - im * ci);
    result[2 * j + 1] = scale * (re * ci + im * cr);
  }
  return result;
}

export interface FeaturizedSet {
  /** canonicalized inputs, row-major [count, inputSize] */
  x: Float32Array;
  /** multi-hot support targets, row-major [count, n] */
  targets: Float32Array;
  /** supports per row (ascending) */
  supports: number[][];
  count: number;
  inputSize: number;
  outputSize: number;
}

export interface FeaturizeOptions {
  /** drop rows whose canonical input and support duplicate an earlier row
   * (safe always: identical input, identical label) */
  deduplicate?: boolean;
}

export function featurize(
  rows: { y: Float64Array; support: number[] }[],
  n: number,
  options: FeaturizeOptions = {},
): FeaturizedSet {
  if (!rows.length) throw new Error("cannot featurize an empty dataset");
  const inputSize = rows[0].y.length;
  const keep: { x: Float32Array; support: number[] }[] = [];
  const seen = options.deduplicate ? new Set<string>() : null;
  for (const row of rows) {
    const x = canonicalize(row.y);
    if (seen) {
      const key = row.support.join(",") + "|" + Buffer.from(x.buffer.slice(0)).toString("base64");
      if (seen.has(key)) continue;
      seen.add(key);
    }
    keep.push({ x, support: row.support });
  }
  const x = new Float32Array(keep.length * inputSize);
  const targets = new Float32Array(keep.length * n);
  const supports: number[][] = [];
  keep.forEach((row, i) => {
    x.set(row.x, i * inputSize);
    for (const idx of row.support) targets[i * n + idx] = 1;
    supports.push(row.support.slice());
  });
  return { x, targets, supports, count: keep.length, inputSize, outputSize: n };
}
