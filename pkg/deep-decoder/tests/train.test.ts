import { describe, expect, it } from "vitest";
import { loadDataset } from "../src/dataset";
import { specForSystem } from "../src/network";
import { trainDecoder } from "../src/train";
import { ensureFixtures } from "./helpers";

const fixtures = ensureFixtures();

describe("training", () => {
  it("overfits a 100-example dataset to >= 99% support accuracy", async () => {
    const ds = loadDataset(fixtures.overfit);
    const { net } = await trainDecoder(ds, {
      epochs: 220,
      batchSize: 16,
      validationSplit: 0,
      targetValidationAccuracy: null,
      seed: 3,
    });
    let hits = 0;
    for (const row of ds.rows) {
      const predicted = net.predictSupport(row.y, ds.k);
      if (predicted[0] === row.support[0] && predicted[1] === row.support[1]) hits++;
    }
    expect(hits / ds.count).toBeGreaterThanOrEqual(0.99);
  }, 300_000);

  it("is deterministic for a fixed seed", async () => {
    const ds = loadDataset(fixtures.tiny);
    const run = () =>
      trainDecoder(ds, {
        epochs: 6,
        batchSize: 8,
        validationSplit: 0.1,
        targetValidationAccuracy: null,
        seed: 42,
      });
    const first = await run();
    const second = await run();
    expect(second.log).toEqual(first.log);
    expect(Array.from(second.net.outW)).toEqual(Array.from(first.net.outW));
  });

  it("feeds the m=42 dataset into an 84-value first layer", async () => {
    const ds = loadDataset(fixtures.tiny);
    const { net } = await trainDecoder(ds, {
      epochs: 1,
      validationSplit: 0,
      targetValidationAccuracy: null,
    });
    expect(net.spec.inputSize).toBe(84);
    expect(net.spec).toEqual(specForSystem(42, 96));
  });

  it("keeps a held-out validation slice and logs its accuracy", async () => {
    const ds = loadDataset(fixtures.overfit);
    const result = await trainDecoder(ds, {
      epochs: 2,
      validationSplit: 0.2,
      targetValidationAccuracy: null,
      seed: 9,
    });
    expect(result.validationExamples).toBeGreaterThan(0);
    expect(result.trainedExamples + result.validationExamples).toBeLessThanOrEqual(ds.count);
    for (const entry of result.log) {
      expect(entry.validationAccuracy).not.toBeNull();
      expect(entry.validationAccuracy!).toBeGreaterThanOrEqual(0);
      expect(entry.validationAccuracy!).toBeLessThanOrEqual(1);
    }
  });

  it("rejects degenerate configs", async () => {
    const ds = loadDataset(fixtures.tiny);
    await expect(trainDecoder(ds, { epochs: 0 })).rejects.toThrow(/positive/);
    await expect(trainDecoder(ds, { validationSplit: 1.0 })).rejects.toThrow(/validation/);
  });
});
