/**
 * Greedy baseline decoder for the head-to-head comparison: per iteration,
 * select the codebook column maximally correlated with the residual (ties
 * toward the lower index), then least-squares refit over the selected
 * columns.  Columns are real and unit-norm; measurements are complex.
 */

import { Codebook } from "./codebook";

/** solve the symmetric positive-definite real system G x = b for a complex
 * right-hand side via Gaussian elimination with partial pivoting */
function solveRealSystem(g: Float64Array, size: number, bRe: Float64Array, bIm: Float64Array): void {
  const a = Float64Array.from(g);
  for (let col = 0; col < size; col++) {
    let pivot = col;
    for (let r = col + 1; r < size; r++) {
      if (Math.abs(a[r * size + col]) > Math.abs(a[pivot * size + col])) pivot = r;
    }
    if (a[pivot * size + col] === 0) throw new Error("selected columns are rank deficient");
    if (pivot !== col) {
      for (let c = 0; c < size; c++) {
        const tmp = a[col * size + c];
        a[col * size + c] = a[pivot * size + c];
        a[pivot * size + c] = tmp;
      }
      [bRe[col], bRe[pivot]] = [bRe[pivot], bRe[col]];
      [bIm[col], bIm[pivot]] = [bIm[pivot], bIm[col]];
    }
    const diag = a[col * size + col];
    for (let r = col + 1; r < size; r++) {
      const factor = a[r * size + col] / diag;
      if (factor === 0) continue;
      for (let c = col; c < size; c++) a[r * size + c] -= factor * a[col * size + c];
      bRe[r] -= factor * bRe[col];
      bIm[r] -= factor * bIm[col];
    }
  }
  for (let r = size - 1; r >= 0; r--) {
    let accRe = bRe[r];
    let accIm = bIm[r];
    for (let c = r + 1; c < size; c++) {
      accRe -= a[r * size + c] * bRe[c];
      accIm -= a[r * size + c] * bIm[c];
    }
    bRe[r] = accRe / a[r * size + r];
    bIm[r] = accIm / a[r * size + r];
  }
}

export interface OmpResult {
  /** recovered support, ascending */
  support: number[];
  residualNorm: number;
}

export function ompSupport(y: Float64Array, codebook: Codebook, k: number): OmpResult {
  const { m, n, entries } = codebook;
  if (y.length !== 2 * m) {
    throw new Error(`measurement has ${y.length / 2} samples, codebook expects ${m}`);
  }
  if (k < 1 || k > Math.min(m, n)) {
    throw new Error(`need 1 <= k <= min(m, n), got ${k}`);
  }
  const resRe = new Float64Array(m);
  const resIm = new Float64Array(m);
  for (let j = 0; j < m; j++) {
    resRe[j] = y[2 * j];
    resIm[j] = y[2 * j + 1];
  }
  const selected: number[] = [];
  const taken = new Uint8Array(n);

  for (let it = 0; it < k; it++) {
    let best = -1;
    let bestVal = -1;
    for (let c = 0; c < n; c++) {
      if (taken[c]) continue;
      let accRe = 0;
      let accIm = 0;
      for (let j = 0; j < m; j++) {
        const w = entries[j * n + c];
        accRe += w * resRe[j];
        accIm += w * resIm[j];
      }
      const mag = accRe * accRe + accIm * accIm;
      if (mag > bestVal) {
        bestVal = mag;
        best = c;
      }
    }
    selected.push(best);
    taken[best] = 1;

    // least-squares refit over all selected columns
    const size = selected.length;
    const gram = new Float64Array(size * size);
    const bRe = new Float64Array(size);
    const bIm = new Float64Array(size);
    for (let a = 0; a < size; a++) {
      for (let b = a; b < size; b++) {
        let acc = 0;
        for (let j = 0; j < m; j++) {
          acc += entries[j * n + selected[a]] * entries[j * n + selected[b]];
        }
        gram[a * size + b] = acc;
        gram[b * size + a] = acc;
      }
      let accRe = 0;
      let accIm = 0;
      for (let j = 0; j < m; j++) {
        const w = entries[j * n + selected[a]];
        accRe += w * y[2 * j];
        accIm += w * y[2 * j + 1];
      }
      bRe[a] = accRe;
      bIm[a] = accIm;
    }
    solveRealSystem(gram, size, bRe, bIm);
    for (let j = 0; j < m; j++) {
      let accRe = y[2 * j];
      let accIm = y[2 * j + 1];
      for (let a = 0; a < size; a++) {
        const w = entries[j * n + selected[a]];
        accRe -= w * bRe[a];
        accIm -= w * bIm[a];
      }
      resRe[j] = accRe;
      resIm[j] = accIm;
    }
  }
  let norm2 = 0;
  for (let j = 0; j < m; j++) norm2 += resRe[j] * resRe[j] + resIm[j] * resIm[j];
  return { support: selected.slice().sort((a, b) => a - b), residualNorm: Math.sqrt(norm2) };
}
