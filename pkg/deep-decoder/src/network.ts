/**
 * One-dimensional convolutional support classifier, implemented directly on
 * typed arrays (this sandbox has no trainable native/WASM conv backend, and
 * the network is small enough that explicit loops train in seconds).
 *
 * Topology: the 2m canonicalized reals enter a single-channel 1-D
 * convolution (T filters of size q, same padding, ReLU), max pooling of
 * size p along the sample axis, then a stack of L fully-connected ReLU
 * layers of width 2m, and a final n-way scoring layer read out through a
 * per-position sigmoid.  The declared shape chain is asserted at build.
 */

import { readFileSync, writeFileSync } from "fs";
import { canonicalize } from "./featurize";
import { gaussian, mulberry32 } from "./rng";

export interface NetSpec {
  /** 2m reals consumed by the first layer */
  inputSize: number;
  /** T convolution filters */
  filters: number;
  /** q taps per filter */
  kernelSize: number;
  /** p, max-pool window and stride */
  poolSize: number;
  /** L hidden fully-connected layers */
  hiddenLayers: number;
  /** width of each hidden layer (2m) */
  hiddenWidth: number;
  /** n output scores */
  outputSize: number;
}

/** The reference geometry: input and hidden width are twice the
 * measurement count, 32 filters of size 3, pool 2, six hidden layers. */
export function specForSystem(m: number, n: number): NetSpec {
  return {
    inputSize: 2 * m,
    filters: 32,
    kernelSize: 3,
    poolSize: 2,
    hiddenLayers: 6,
    hiddenWidth: 2 * m,
    outputSize: n,
  };
}

export interface LayerShape {
  name: string;
  output: number[];
}

export interface ForwardState {
  batch: number;
  /** post-ReLU conv activations [batch, inputSize, filters] */
  conv: Float32Array;
  /** pooled activations [batch, pooled, filters] */
  pool: Float32Array;
  /** winning time index per pooled cell (for backprop) */
  poolArg: Int32Array;
  /** post-ReLU hidden activations, one buffer per layer [batch, width] */
  hidden: Float32Array[];
  /** output logits [batch, outputSize] */
  logits: Float32Array;
}

export interface SerializedNet {
  spec: NetSpec;
  weights: Record<string, string>; // base64 little-endian float32
}

function encode(w: Float32Array): string {
  return Buffer.from(w.buffer, w.byteOffset, w.byteLength).toString("base64");
}

function decode(text: string, expected: number): Float32Array {
  const buf = Buffer.from(text, "base64");
  if (buf.byteLength !== expected * 4) {
    throw new Error(`weight blob has ${buf.byteLength / 4} values, expected ${expected}`);
  }
  return new Float32Array(buf.buffer.slice(buf.byteOffset, buf.byteOffset + buf.byteLength));
}

export class ConvNet {
  readonly spec: NetSpec;
  readonly pooled: number;
  readonly flat: number;
  convW: Float32Array; // [filters, kernelSize]
  convB: Float32Array; // [filters]
  denseW: Float32Array[]; // layer l: [width, fanIn] row-major
  denseB: Float32Array[];
  outW: Float32Array; // [outputSize, width]
  outB: Float32Array;

  constructor(spec: NetSpec) {
    if (spec.inputSize % spec.poolSize !== 0) {
      throw new Error(
        `pool size ${spec.poolSize} must divide the input length ${spec.inputSize}`,
      );
    }
    for (const [name, value] of Object.entries(spec)) {
      if (!Number.isInteger(value) || value < 1) {
        throw new Error(`spec field ${name} must be a positive integer, got ${value}`);
      }
    }
    this.spec = spec;
    this.pooled = spec.inputSize / spec.poolSize;
    this.flat = this.pooled * spec.filters;
    this.convW = new Float32Array(spec.filters * spec.kernelSize);
    this.convB = new Float32Array(spec.filters);
    this.denseW = [];
    this.denseB = [];
    for (let l = 0; l < spec.hiddenLayers; l++) {
      const fanIn = l === 0 ? this.flat : spec.hiddenWidth;
      this.denseW.push(new Float32Array(spec.hiddenWidth * fanIn));
      this.denseB.push(new Float32Array(spec.hiddenWidth));
    }
    this.outW = new Float32Array(spec.outputSize * spec.hiddenWidth);
    this.outB = new Float32Array(spec.outputSize);
    this.assertShapeChain();
  }

  static initialized(spec: NetSpec, seed: number): ConvNet {
    const net = new ConvNet(spec);
    const rng = mulberry32(seed);
    const fill = (w: Float32Array, fanIn: number) => {
      const scale = Math.sqrt(2 / fanIn);
      for (let i = 0; i < w.length; i++) w[i] = scale * gaussian(rng);
    };
    fill(net.convW, spec.kernelSize);
    net.denseW.forEach((w, l) => fill(w, l === 0 ? net.flat : spec.hiddenWidth));
    fill(net.outW, spec.hiddenWidth);
    return net;
  }

  /** declared shape of every layer output; the constructor verifies each
   * consecutive pair is consistent with the next layer's expectations */
  layerShapes(): LayerShape[] {
    const s = this.spec;
    return [
      { name: "input", output: [s.inputSize, 1] },
      { name: "conv1d", output: [s.inputSize, s.filters] },
      { name: "maxpool", output: [this.pooled, s.filters] },
      { name: "flatten", output: [this.flat] },
      ...Array.from({ length: s.hiddenLayers }, (_, l) => ({
        name: `dense${l + 1}`,
        output: [s.hiddenWidth],
      })),
      { name: "scores", output: [s.outputSize] },
    ];
  }

  private assertShapeChain(): void {
    const s = this.spec;
    const shapes = this.layerShapes();
    const expectFlat = shapes[2].output[0] * shapes[2].output[1];
    if (shapes[1].output[0] !== s.inputSize || shapes[2].output[0] * s.poolSize !== s.inputSize) {
      throw new Error("pooling does not reduce the sample axis by exactly the pool size");
    }
    if (shapes[3].output[0] !== expectFlat) {
      throw new Error("flatten width does not match pooled activations");
    }
    if (this.denseW[0].length !== s.hiddenWidth * expectFlat) {
      throw new Error("first dense layer does not consume the flattened activations");
    }
    for (let l = 1; l < s.hiddenLayers; l++) {
      if (this.denseW[l].length !== s.hiddenWidth * s.hiddenWidth) {
        throw new Error(`dense layer ${l + 1} input does not match predecessor output`);
      }
    }
    if (this.outW.length !== s.outputSize * s.hiddenWidth) {
      throw new Error("output layer does not consume the last hidden layer");
    }
  }

  parameterCount(): number {
    let total = this.convW.length + this.convB.length + this.outW.length + this.outB.length;
    this.denseW.forEach((w) => (total += w.length));
    this.denseB.forEach((b) => (total += b.length));
    return total;
  }

  createState(batch: number): ForwardState {
    const s = this.spec;
    return {
      batch,
      conv: new Float32Array(batch * s.inputSize * s.filters),
      pool: new Float32Array(batch * this.pooled * s.filters),
      poolArg: new Int32Array(batch * this.pooled * s.filters),
      hidden: Array.from({ length: s.hiddenLayers }, () => new Float32Array(batch * s.hiddenWidth)),
      logits: new Float32Array(batch * s.outputSize),
    };
  }

  /** forward pass over `batch` canonicalized rows packed in x; logits land
   * in state.logits */
  forward(x: Float32Array, batch: number, state: ForwardState): Float32Array {
    const s = this.spec;
    const { filters: T, kernelSize: q, inputSize, poolSize: p, hiddenLayers: L, hiddenWidth: width, outputSize } = s;
    const half = (q - 1) >> 1;
    const pooled = this.pooled;
    if (batch > state.batch) throw new Error("forward state too small for batch");
    for (let b = 0; b < batch; b++) {
      const xo = b * inputSize;
      const co = b * inputSize * T;
      for (let t = 0; t < inputSize; t++) {
        const lo = Math.max(0, half - t);
        const hi = Math.min(q, inputSize + half - t);
        for (let f = 0; f < T; f++) {
          let acc = this.convB[f];
          const wo = f * q;
          for (let dk = lo; dk < hi; dk++) {
            acc += this.convW[wo + dk] * x[xo + t + dk - half];
          }
          state.conv[co + t * T + f] = acc > 0 ? acc : 0;
        }
      }
      const po = b * pooled * T;
      for (let tp = 0; tp < pooled; tp++) {
        for (let f = 0; f < T; f++) {
          let bestVal = -Infinity;
          let bestIdx = -1;
          for (let dt = 0; dt < p; dt++) {
            const src = tp * p + dt;
            const v = state.conv[co + src * T + f];
            if (v > bestVal) {
              bestVal = v;
              bestIdx = src;
            }
          }
          state.pool[po + tp * T + f] = bestVal;
          state.poolArg[po + tp * T + f] = bestIdx;
        }
      }
      let input: Float32Array = state.pool;
      let inOff = po;
      let inLen = this.flat;
      for (let l = 0; l < L; l++) {
        const W = this.denseW[l];
        const B = this.denseB[l];
        const out = state.hidden[l];
        const oo = b * width;
        for (let o = 0; o < width; o++) {
          let acc = B[o];
          const wo = o * inLen;
          for (let i = 0; i < inLen; i++) acc += W[wo + i] * input[inOff + i];
          out[oo + o] = acc > 0 ? acc : 0;
        }
        input = out;
        inOff = oo;
        inLen = width;
      }
      const zo = b * outputSize;
      const hLast = state.hidden[L - 1];
      const ho = b * width;
      for (let o = 0; o < outputSize; o++) {
        let acc = this.outB[o];
        const wo = o * width;
        for (let i = 0; i < width; i++) acc += this.outW[wo + i] * hLast[ho + i];
        state.logits[zo + o] = acc;
      }
    }
    return state.logits;
  }

  /** scores for one raw (un-canonicalized) received vector */
  scores(y: Float64Array): Float32Array {
    const x = canonicalize(y);
    const state = this.createState(1);
    this.forward(x, 1, state);
    return state.logits.slice(0, this.spec.outputSize);
  }

  /** top-k scoring positions for one received vector, ascending */
  predictSupport(y: Float64Array, k: number): number[] {
    return topKIndices(this.scores(y), 0, this.spec.outputSize, k);
  }

  /** batched prediction over many rows (canonicalizes internally) */
  predictSupportBatch(rows: { y: Float64Array }[], k: number, batchSize = 256): number[][] {
    const s = this.spec;
    const state = this.createState(batchSize);
    const x = new Float32Array(batchSize * s.inputSize);
    const out: number[][] = [];
    const scratch = new Float32Array(s.inputSize);
    for (let start = 0; start < rows.length; start += batchSize) {
      const batch = Math.min(batchSize, rows.length - start);
      for (let b = 0; b < batch; b++) {
        canonicalize(rows[start + b].y, scratch);
        x.set(scratch, b * s.inputSize);
      }
      this.forward(x, batch, state);
      for (let b = 0; b < batch; b++) {
        out.push(topKIndices(state.logits, b * s.outputSize, s.outputSize, k));
      }
    }
    return out;
  }

  serialize(): string {
    const weights: Record<string, string> = {
      convW: encode(this.convW),
      convB: encode(this.convB),
      outW: encode(this.outW),
      outB: encode(this.outB),
    };
    this.denseW.forEach((w, l) => (weights[`denseW${l}`] = encode(w)));
    this.denseB.forEach((b, l) => (weights[`denseB${l}`] = encode(b)));
    const payload: SerializedNet = { spec: this.spec, weights };
    return JSON.stringify(payload);
  }

  static deserialize(text: string): ConvNet {
    const payload = JSON.parse(text) as SerializedNet;
    const net = new ConvNet(payload.spec);
    net.convW = decode(payload.weights.convW, net.convW.length);
    net.convB = decode(payload.weights.convB, net.convB.length);
    net.outW = decode(payload.weights.outW, net.outW.length);
    net.outB = decode(payload.weights.outB, net.outB.length);
    for (let l = 0; l < payload.spec.hiddenLayers; l++) {
      net.denseW[l] = decode(payload.weights[`denseW${l}`], net.denseW[l].length);
      net.denseB[l] = decode(payload.weights[`denseB${l}`], net.denseB[l].length);
    }
    return net;
  }

  save(path: string): void {
    writeFileSync(path, this.serialize());
  }

  static load(path: string): ConvNet {
    return ConvNet.deserialize(readFileSync(path, "utf-8"));
  }
}

/** indices of the k largest scores, ties toward the lower index, returned
 * ascending */
export function topKIndices(scores: Float32Array, offset: number, n: number, k: number): number[] {
  const order = Array.from({ length: n }, (_, i) => i);
  order.sort((a, b) => scores[offset + b] - scores[offset + a] || a - b);
  return order.slice(0, k).sort((a, b) => a - b);
}
