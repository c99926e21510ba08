/**
 * Command-line entry points:
 *
 *   train         --data FILE --model-out FILE [--log-out FILE] [--epochs N]
 *                 [--batch-size N] [--learning-rate X] [--seed N]
 *                 [--val-split X] [--no-dedup]
 *   evaluate      --data FILE --model FILE [--out CSV]
 *   evaluate-omp  --data FILE --codebook FILE [--out CSV]
 *
 * Exit codes: 0 success, 1 usage/config error, 2 I/O error.
 */

import { writeFileSync } from "fs";
import { loadCodebook } from "./codebook";
import { loadDataset } from "./dataset";
import { CSV_HEADER, evaluateDecoder, evaluateOmpBaseline, reportToCsv, writeReportCsv } from "./evaluate";
import { ConvNet } from "./network";
import { TrainConfig, trainDecoder } from "./train";

class UsageError extends Error {}

function parseFlags(argv: string[], known: Set<string>): Map<string, string> {
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i];
    if (!flag.startsWith("--") || !known.has(flag)) {
      throw new UsageError(`unknown flag ${flag}`);
    }
    if (flag === "--no-dedup") {
      flags.set(flag, "true");
      i -= 1;
      continue;
    }
    const value = argv[i + 1];
    if (value === undefined) throw new UsageError(`flag ${flag} needs a value`);
    flags.set(flag, value);
  }
  return flags;
}

function need(flags: Map<string, string>, flag: string): string {
  const value = flags.get(flag);
  if (value === undefined) throw new UsageError(`missing required flag ${flag}`);
  return value;
}

function numeric(flags: Map<string, string>, flag: string): number | undefined {
  const raw = flags.get(flag);
  if (raw === undefined) return undefined;
  const value = Number(raw);
  if (!Number.isFinite(value)) throw new UsageError(`flag ${flag} expects a number`);
  return value;
}

async function runTrain(argv: string[]): Promise<number> {
  const flags = parseFlags(
    argv,
    new Set([
      "--data", "--model-out", "--log-out", "--epochs", "--batch-size",
      "--learning-rate", "--seed", "--val-split", "--no-dedup",
    ]),
  );
  const dataset = loadDataset(need(flags, "--data"));
  const overrides: Partial<TrainConfig> = {};
  const epochs = numeric(flags, "--epochs");
  if (epochs !== undefined) overrides.epochs = epochs;
  const batch = numeric(flags, "--batch-size");
  if (batch !== undefined) overrides.batchSize = batch;
  const lr = numeric(flags, "--learning-rate");
  if (lr !== undefined) overrides.learningRate = lr;
  const seed = numeric(flags, "--seed");
  if (seed !== undefined) overrides.seed = seed;
  const valSplit = numeric(flags, "--val-split");
  if (valSplit !== undefined) overrides.validationSplit = valSplit;
  if (flags.has("--no-dedup")) overrides.deduplicate = false;

  const result = await trainDecoder(dataset, overrides);
  result.net.save(need(flags, "--model-out"));
  const logPath = flags.get("--log-out");
  if (logPath) writeFileSync(logPath, JSON.stringify(result.log, null, 1));
  const last = result.log[result.log.length - 1];
  console.log(
    `trained ${result.trainedExamples} examples, ${result.log.length} epochs, ` +
      `final loss ${last.loss.toExponential(3)}, validation accuracy ` +
      `${last.validationAccuracy === null ? "n/a" : (last.validationAccuracy * 100).toFixed(2) + "%"}`,
  );
  return 0;
}

function runEvaluate(argv: string[], baseline: boolean): number {
  const flags = parseFlags(
    argv,
    new Set(["--data", "--model", "--codebook", "--out"]),
  );
  const dataset = loadDataset(need(flags, "--data"));
  const report = baseline
    ? evaluateOmpBaseline(dataset, loadCodebook(need(flags, "--codebook")))
    : evaluateDecoder(ConvNet.load(need(flags, "--model")), dataset);
  const out = flags.get("--out");
  if (out) writeReportCsv(report, out);
  else process.stdout.write(reportToCsv(report));
  console.error(
    `support-exact ${(report.supportExactRate * 100).toFixed(2)}% ` +
      `(${report.trials - report.blockErrors}/${report.trials})`,
  );
  return 0;
}

export async function main(argv: string[]): Promise<number> {
  try {
    const [command, ...rest] = argv;
    switch (command) {
      case "train":
        return runTrain(rest);
      case "evaluate":
        return runEvaluate(rest, false);
      case "evaluate-omp":
        return runEvaluate(rest, true);
      default:
        throw new UsageError(
          `usage: train | evaluate | evaluate-omp (CSV schema: ${CSV_HEADER})`,
        );
    }
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    if (err instanceof Error && "code" in err) {
      console.error(`i/o error: ${err.message}`);
      return 2;
    }
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

if (require.main === module) {
  main(process.argv.slice(2)).then((code) => process.exit(code));
}
