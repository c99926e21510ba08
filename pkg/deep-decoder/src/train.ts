/**
 * Training loop: multi-hot support classification with a per-position
 * binary cross-entropy objective, Adam updates, seeded shuffling, and an
 * optional early stop on held-out support accuracy.  Everything is
 * deterministic for a fixed config (no Math.random in the pipeline).
 */

import { SvcDataset } from "./dataset";
import { FeaturizedSet, featurize } from "./featurize";
import { ConvNet, ForwardState, NetSpec, specForSystem, topKIndices } from "./network";
import { mulberry32, shuffleInPlace } from "./rng";

export interface TrainConfig {
  /** maximum epochs; early stop may end training sooner */
  epochs: number;
  batchSize: number;
  learningRate: number;
  /** learning rate is multiplied by lrDecayFactor at these epoch indices */
  lrDecayAt: number[];
  lrDecayFactor: number;
  /** fraction of (deduplicated) examples held out for validation accuracy */
  validationSplit: number;
  /** stop once validation support accuracy reaches this level (null: never) */
  targetValidationAccuracy: number | null;
  seed: number;
  /** merge rows with identical canonical input and label before training */
  deduplicate: boolean;
}

export const defaultTrainConfig: TrainConfig = {
  epochs: 130,
  batchSize: 64,
  learningRate: 1e-3,
  lrDecayAt: [50, 80, 105],
  lrDecayFactor: 0.4,
  validationSplit: 0.05,
  targetValidationAccuracy: 0.999,
  seed: 1,
  deduplicate: true,
};

export interface EpochLog {
  epoch: number;
  loss: number;
  learningRate: number;
  validationAccuracy: number | null;
}

export interface TrainResult {
  net: ConvNet;
  log: EpochLog[];
  trainedExamples: number;
  validationExamples: number;
}

interface Gradients {
  convW: Float32Array;
  convB: Float32Array;
  denseW: Float32Array[];
  denseB: Float32Array[];
  outW: Float32Array;
  outB: Float32Array;
}

function zeroedLike(net: ConvNet): Gradients {
  return {
    convW: new Float32Array(net.convW.length),
    convB: new Float32Array(net.convB.length),
    denseW: net.denseW.map((w) => new Float32Array(w.length)),
    denseB: net.denseB.map((b) => new Float32Array(b.length)),
    outW: new Float32Array(net.outW.length),
    outB: new Float32Array(net.outB.length),
  };
}

class Adam {
  private readonly m: Gradients;
  private readonly v: Gradients;
  private step_ = 0;

  constructor(private readonly net: ConvNet) {
    this.m = zeroedLike(net);
    this.v = zeroedLike(net);
  }

  step(grads: Gradients, lr: number): void {
    this.step_++;
    const b1 = 0.9;
    const b2 = 0.999;
    const eps = 1e-8;
    const c1 = 1 - Math.pow(b1, this.step_);
    const c2 = 1 - Math.pow(b2, this.step_);
    const update = (w: Float32Array, g: Float32Array, m: Float32Array, v: Float32Array) => {
      for (let i = 0; i < w.length; i++) {
        m[i] = b1 * m[i] + (1 - b1) * g[i];
        v[i] = b2 * v[i] + (1 - b2) * g[i] * g[i];
        w[i] -= (lr * (m[i] / c1)) / (Math.sqrt(v[i] / c2) + eps);
      }
    };
    update(this.net.convW, grads.convW, this.m.convW, this.v.convW);
    update(this.net.convB, grads.convB, this.m.convB, this.v.convB);
    for (let l = 0; l < this.net.denseW.length; l++) {
      update(this.net.denseW[l], grads.denseW[l], this.m.denseW[l], this.v.denseW[l]);
      update(this.net.denseB[l], grads.denseB[l], this.m.denseB[l], this.v.denseB[l]);
    }
    update(this.net.outW, grads.outW, this.m.outW, this.v.outW);
    update(this.net.outB, grads.outB, this.m.outB, this.v.outB);
  }
}

function zeroGradients(g: Gradients): void {
  g.convW.fill(0);
  g.convB.fill(0);
  g.denseW.forEach((w) => w.fill(0));
  g.denseB.forEach((b) => b.fill(0));
  g.outW.fill(0);
  g.outB.fill(0);
}

/**
 * Accumulate gradients of the mean per-position BCE over a forward-passed
 * batch.  Returns the batch loss.  The convolution is the first layer, so
 * no gradient with respect to the input is ever needed.
 */
export function backward(
  net: ConvNet,
  x: Float32Array,
  targets: Float32Array,
  batch: number,
  state: ForwardState,
  grads: Gradients,
): number {
  const s = net.spec;
  const { filters: T, kernelSize: q, inputSize, poolSize: p, hiddenLayers: L, hiddenWidth: width, outputSize } = s;
  const half = (q - 1) >> 1;
  const pooled = net.pooled;
  const flat = net.flat;
  const dHidden = Array.from({ length: L }, () => new Float32Array(width));
  const dPool = new Float32Array(flat);
  const dOut = new Float32Array(outputSize);
  const scale = 1 / (batch * outputSize);
  let loss = 0;

  for (let b = 0; b < batch; b++) {
    const zo = b * outputSize;
    for (let o = 0; o < outputSize; o++) {
      const z = state.logits[zo + o];
      const y = targets[zo + o];
      loss += (Math.max(z, 0) - y * z + Math.log1p(Math.exp(-Math.abs(z)))) * scale;
      dOut[o] = (1 / (1 + Math.exp(-z)) - y) * scale;
    }

    const hLast = state.hidden[L - 1];
    const ho = b * width;
    const dLast = dHidden[L - 1];
    dLast.fill(0);
    for (let o = 0; o < outputSize; o++) {
      const d = dOut[o];
      const wo = o * width;
      grads.outB[o] += d;
      for (let i = 0; i < width; i++) {
        grads.outW[wo + i] += d * hLast[ho + i];
        dLast[i] += net.outW[wo + i] * d;
      }
    }

    for (let l = L - 1; l >= 0; l--) {
      const inLen = l === 0 ? flat : width;
      const input = l === 0 ? state.pool : state.hidden[l - 1];
      const inOff = l === 0 ? b * flat : b * width;
      const act = state.hidden[l];
      const ao = b * width;
      const dAct = dHidden[l];
      const dIn = l === 0 ? dPool : dHidden[l - 1];
      dIn.fill(0);
      const W = net.denseW[l];
      const gW = grads.denseW[l];
      const gB = grads.denseB[l];
      for (let o = 0; o < width; o++) {
        if (act[ao + o] <= 0) continue; // ReLU gate
        const d = dAct[o];
        const wo = o * inLen;
        gB[o] += d;
        for (let i = 0; i < inLen; i++) {
          gW[wo + i] += d * input[inOff + i];
          dIn[i] += W[wo + i] * d;
        }
      }
    }

    const co = b * inputSize * T;
    const po = b * pooled * T;
    const xo = b * inputSize;
    for (let tp = 0; tp < pooled; tp++) {
      for (let f = 0; f < T; f++) {
        const d = dPool[tp * T + f];
        if (d === 0) continue;
        const src = state.poolArg[po + tp * T + f]; // winner takes the gradient
        if (state.conv[co + src * T + f] <= 0) continue; // ReLU gate
        grads.convB[f] += d;
        const wo = f * q;
        for (let dk = 0; dk < q; dk++) {
          const xi = src + dk - half;
          if (xi >= 0 && xi < inputSize) grads.convW[wo + dk] += d * x[xo + xi];
        }
      }
    }
  }
  return loss;
}

function supportAccuracy(
  net: ConvNet,
  set: FeaturizedSet,
  indices: Int32Array,
  k: number,
): number {
  if (!indices.length) return NaN;
  const state = net.createState(1);
  const row = new Float32Array(set.inputSize);
  let hits = 0;
  for (const idx of indices) {
    row.set(set.x.subarray(idx * set.inputSize, (idx + 1) * set.inputSize));
    net.forward(row, 1, state);
    const predicted = topKIndices(state.logits, 0, set.outputSize, k);
    const truth = set.supports[idx];
    if (predicted.length === truth.length && predicted.every((v, i) => v === truth[i])) hits++;
  }
  return hits / indices.length;
}

export async function trainDecoder(
  dataset: SvcDataset,
  config: Partial<TrainConfig> = {},
  spec?: NetSpec,
): Promise<TrainResult> {
  const cfg: TrainConfig = { ...defaultTrainConfig, ...config };
  if (cfg.epochs < 1 || cfg.batchSize < 1 || cfg.learningRate <= 0) {
    throw new Error("epochs, batch size, and learning rate must be positive");
  }
  if (cfg.validationSplit < 0 || cfg.validationSplit >= 1) {
    throw new Error("validation split must lie in [0, 1)");
  }
  const netSpec = spec ?? specForSystem(dataset.m, dataset.n);
  if (netSpec.inputSize !== 2 * dataset.m) {
    throw new Error(
      `network consumes ${netSpec.inputSize} values but dataset rows carry ${2 * dataset.m}`,
    );
  }
  const set = featurize(dataset.rows, dataset.n, { deduplicate: cfg.deduplicate });

  const rng = mulberry32(cfg.seed);
  const order = Int32Array.from({ length: set.count }, (_, i) => i);
  shuffleInPlace(order, rng);
  const valCount = Math.floor(set.count * cfg.validationSplit);
  const valIdx = order.slice(0, valCount);
  const trainIdx = order.slice(valCount);
  if (!trainIdx.length) throw new Error("no training examples after the validation split");

  const net = ConvNet.initialized(netSpec, cfg.seed);
  const adam = new Adam(net);
  const grads = zeroedLike(net);
  const state = net.createState(cfg.batchSize);
  const bx = new Float32Array(cfg.batchSize * set.inputSize);
  const by = new Float32Array(cfg.batchSize * set.outputSize);

  const log: EpochLog[] = [];
  let lr = cfg.learningRate;
  for (let epoch = 0; epoch < cfg.epochs; epoch++) {
    if (cfg.lrDecayAt.includes(epoch)) lr *= cfg.lrDecayFactor;
    shuffleInPlace(trainIdx, rng);
    let lossSum = 0;
    let batches = 0;
    for (let start = 0; start < trainIdx.length; start += cfg.batchSize) {
      const batch = Math.min(cfg.batchSize, trainIdx.length - start);
      for (let b = 0; b < batch; b++) {
        const src = trainIdx[start + b];
        bx.set(set.x.subarray(src * set.inputSize, (src + 1) * set.inputSize), b * set.inputSize);
        by.set(
          set.targets.subarray(src * set.outputSize, (src + 1) * set.outputSize),
          b * set.outputSize,
        );
      }
      net.forward(bx, batch, state);
      zeroGradients(grads);
      lossSum += backward(net, bx, by, batch, state, grads);
      adam.step(grads, lr);
      batches++;
    }
    const valAccuracy = valCount ? supportAccuracy(net, set, valIdx, dataset.k) : null;
    log.push({ epoch, loss: lossSum / batches, learningRate: lr, validationAccuracy: valAccuracy });
    if (
      cfg.targetValidationAccuracy !== null &&
      valAccuracy !== null &&
      valAccuracy >= cfg.targetValidationAccuracy
    ) {
      break;
    }
    // long synchronous epochs starve cooperative runtimes; yield between them
    await new Promise(setImmediate);
  }
  return { net, log, trainedExamples: trainIdx.length, validationExamples: valCount };
}
