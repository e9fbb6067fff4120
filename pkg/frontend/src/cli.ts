#!/usr/bin/env node
/** spikeflow-figures <kind> --in FILE [--fit FILE] --out FILE
 *
 * kinds:
 *   comparison    rank plot from a comparison.csv
 *   convergence   top-atom convergence from a sweep.csv
 *   degree-ccdf   log-log CCDF from a degrees_rep*.csv (+ optional powerlaw json)
 *   decay         lambda_k k^2 decay from an oracle k-spectrum csv
 */

import { readFileSync, writeFileSync } from "node:fs";
import * as process from "node:process";
import { pathToFileURL } from "node:url";
import {
  SchemaError,
  readComparisonCsv,
  readDegreesCsv,
  readOracleCsv,
  readPowerLawFit,
} from "./csv.js";
import {
  plotDegreeCcdf,
  plotEigenvalueDecay,
  plotKappaConvergence,
  plotSpectrumComparison,
} from "./figures.js";

const KINDS = ["comparison", "convergence", "degree-ccdf", "decay"] as const;
type Kind = (typeof KINDS)[number];

interface Args {
  kind: Kind;
  input: string;
  fit: string | null;
  out: string;
}

function usage(msg: string): never {
  process.stderr.write(`error: ${msg}\n`);
  process.stderr.write(
    `usage: spikeflow-figures <${KINDS.join("|")}> --in FILE [--fit FILE] --out FILE\n`,
  );
  process.exit(2);
}

export function parseArgs(argv: string[]): Args {
  if (argv.length === 0) usage("missing figure kind");
  const kind = argv[0];
  if (!(KINDS as readonly string[]).includes(kind)) usage(`unknown kind: ${kind}`);
  let input: string | null = null;
  let fit: string | null = null;
  let out: string | null = null;
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (value === undefined) usage(`missing value for ${flag}`);
    if (flag === "--in") input = value;
    else if (flag === "--fit") fit = value;
    else if (flag === "--out") out = value;
    else usage(`unknown flag: ${flag}`);
  }
  if (input === null) usage("--in is required");
  if (out === null) usage("--out is required");
  if (fit !== null && kind !== "degree-ccdf") usage("--fit only applies to degree-ccdf");
  return { kind: kind as Kind, input, fit, out };
}

export function render(kind: Kind, inputText: string, fitText: string | null): string {
  switch (kind) {
    case "comparison":
      return plotSpectrumComparison(readComparisonCsv(inputText));
    case "convergence":
      return plotKappaConvergence(readComparisonCsv(inputText));
    case "degree-ccdf":
      return plotDegreeCcdf(
        readDegreesCsv(inputText),
        fitText === null ? null : readPowerLawFit(fitText),
      );
    case "decay":
      return plotEigenvalueDecay(readOracleCsv(inputText));
  }
}

export function main(): void {
  const args = parseArgs(process.argv.slice(2));
  let svg: string;
  try {
    const inputText = readFileSync(args.input, "utf8");
    const fitText = args.fit === null ? null : readFileSync(args.fit, "utf8");
    svg = render(args.kind, inputText, fitText);
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`schema error: ${err.message}\n`);
      process.exit(1);
    }
    throw err;
  }
  writeFileSync(args.out, svg);
  process.stdout.write(`wrote ${args.out}\n`);
}

// run only when invoked as a script, not when imported by tests
if (process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href) {
  main();
}
