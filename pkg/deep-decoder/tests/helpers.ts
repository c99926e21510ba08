/**
 * Fixture management: datasets come from the simulator CLI (the only
 * interface this package consumes) and are cached under tests/.cache so
 * repeated runs do not re-export.
 */

import { execFileSync } from "child_process";
import { existsSync, mkdirSync } from "fs";
import { join } from "path";

export const CACHE_DIR = join(__dirname, ".cache");

function exportDataset(out: string, args: string[]): void {
  try {
    execFileSync("svt", ["export-dataset", "--out", out, ...args], { stdio: "pipe" });
  } catch (err) {
    throw new Error(
      "failed to run the `svt` CLI; install the simulator package first " +
        `(pip install -e ..): ${(err as Error).message}`,
    );
  }
}

export interface Fixtures {
  tiny: string;
  overfit: string;
  train: string;
  eval: string;
  codebook: string;
}

/** export (or reuse) every dataset the tests need; all share one codebook */
export function ensureFixtures(): Fixtures {
  mkdirSync(CACHE_DIR, { recursive: true });
  const paths: Fixtures = {
    tiny: join(CACHE_DIR, "tiny.txt"),
    overfit: join(CACHE_DIR, "overfit.txt"),
    train: join(CACHE_DIR, "train.txt"),
    eval: join(CACHE_DIR, "eval.txt"),
    codebook: join(CACHE_DIR, "codebook.txt"),
  };
  if (!existsSync(paths.tiny) || !existsSync(paths.codebook)) {
    exportDataset(paths.tiny, [
      "--count", "64", "--snr", "inf", "--seed", "5",
      "--codebook-out", paths.codebook,
    ]);
  }
  if (!existsSync(paths.overfit)) {
    exportDataset(paths.overfit, ["--count", "100", "--snr", "inf", "--seed", "21"]);
  }
  if (!existsSync(paths.train)) {
    exportDataset(paths.train, ["--count", "60000", "--snr", "inf", "--seed", "7"]);
  }
  if (!existsSync(paths.eval)) {
    exportDataset(paths.eval, ["--count", "10000", "--snr", "inf", "--seed", "1234"]);
  }
  return paths;
}

export const PARITY_MODEL_PATH = join(CACHE_DIR, "parity-model.json");
