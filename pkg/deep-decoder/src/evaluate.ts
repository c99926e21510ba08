/**
 * Evaluation of a support decoder against a labeled dataset, and CSV output
 * in the simulator's results schema so the two decoders' curves can be
 * diffed with the same tooling.
 */

import { writeFileSync } from "fs";
import { Codebook } from "./codebook";
import { SvcDataset } from "./dataset";
import { ConvNet } from "./network";
import { ompSupport } from "./omp";

export const CSV_HEADER =
  "snr_db,trials,block_errors,bler,support_errors,symbol_errors,ci95";

export interface EvalReport {
  snrDb: number;
  trials: number;
  blockErrors: number;
  bler: number;
  supportErrors: number;
  symbolErrors: number;
  ci95: number;
  /** fraction of rows whose predicted support exactly matches the label */
  supportExactRate: number;
}

function sameSupport(a: number[], b: number[]): boolean {
  return a.length === b.length && a.every((v, i) => v === b[i]);
}

function buildReport(dataset: SvcDataset, predictions: number[][]): EvalReport {
  let errors = 0;
  predictions.forEach((predicted, i) => {
    if (!sameSupport(predicted, dataset.rows[i].support)) errors++;
  });
  const trials = predictions.length;
  const bler = errors / trials;
  // payload rides on positions only, so every block error is a support error
  return {
    snrDb: dataset.snrDb,
    trials,
    blockErrors: errors,
    bler,
    supportErrors: errors,
    symbolErrors: 0,
    ci95: 1.96 * Math.sqrt((bler * (1 - bler)) / trials),
    supportExactRate: 1 - bler,
  };
}

export function evaluateDecoder(net: ConvNet, dataset: SvcDataset): EvalReport {
  return buildReport(dataset, net.predictSupportBatch(dataset.rows, dataset.k));
}

export function evaluateOmpBaseline(dataset: SvcDataset, codebook: Codebook): EvalReport {
  if (codebook.m !== dataset.m || codebook.n !== dataset.n) {
    throw new Error(
      `codebook is ${codebook.m}x${codebook.n} but dataset expects ${dataset.m}x${dataset.n}`,
    );
  }
  const predictions = dataset.rows.map((row) => ompSupport(row.y, codebook, dataset.k).support);
  return buildReport(dataset, predictions);
}

function formatFloat(value: number): string {
  if (value === Infinity) return "inf";
  if (value === -Infinity) return "-inf";
  return String(value);
}

export function reportToCsv(report: EvalReport): string {
  const fields = [
    formatFloat(report.snrDb),
    String(report.trials),
    String(report.blockErrors),
    formatFloat(report.bler),
    String(report.supportErrors),
    String(report.symbolErrors),
    formatFloat(report.ci95),
  ];
  return CSV_HEADER + "\n" + fields.join(",") + "\n";
}

export function writeReportCsv(report: EvalReport, path: string): void {
  writeFileSync(path, reportToCsv(report));
}
