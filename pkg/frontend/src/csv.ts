/** Readers for the CSV tables the simulation side writes. No science here:
 * every number is taken verbatim from the file. */

export interface ComparisonRow {
  kind: string;
  n: number;
  alpha: number | null;
  eps: number | null;
  semantics: string;
  rank: number;
  empMean: number;
  empStd: number | null;
  oracleFinite: number;
  oracleLimit: number;
  relErrFinite: number;
  relErrLimit: number;
}

export interface DegreeRow {
  rank: number;
  outDegree: number;
  inDegree: number;
  totalDegree: number;
}

export interface OracleRow {
  k: number;
  j1Zero: number | null;
  lambdaK: number | null;
  lambdaMTrunc: number | null;
  provenance: string;
}

export interface PowerLawFit {
  fitted: boolean;
  exponent?: number;
  ccdf_slope?: number;
  stderr?: number;
  fit_range?: [number, number];
  hill_exponent?: number;
  method?: string;
  reason?: string;
}

export class SchemaError extends Error {}

/** Split a CSV body into trimmed cell rows. The producers never quote or
 * embed separators, so a plain split is exact. */
export function parseCsv(text: string): string[][] {
  return text
    .split(/\r?\n/)
    .filter(line => line.length > 0)
    .map(line => line.split(","));
}

function requireHeader(rows: string[][], expected: string[], what: string): string[][] {
  if (rows.length === 0) throw new SchemaError(`${what}: empty file`);
  const header = rows[0];
  if (header.length !== expected.length || expected.some((h, i) => header[i] !== h)) {
    throw new SchemaError(
      `${what}: bad header ${JSON.stringify(header)}, expected ${JSON.stringify(expected)}`,
    );
  }
  if (rows.length === 1) throw new SchemaError(`${what}: no data rows`);
  return rows.slice(1);
}

function num(cell: string, what: string): number {
  const v = Number(cell);
  if (cell === "" || !Number.isFinite(v)) throw new SchemaError(`${what}: bad number ${JSON.stringify(cell)}`);
  return v;
}

function numOrNull(cell: string, what: string): number | null {
  if (cell === "") return null;
  const v = Number(cell);
  // the writer uses nan for single-replicate dispersion
  if (cell === "nan") return null;
  if (!Number.isFinite(v)) throw new SchemaError(`${what}: bad number ${JSON.stringify(cell)}`);
  return v;
}

const COMPARISON_HEADER = [
  "kind", "n", "alpha", "eps", "semantics", "rank", "emp_mean", "emp_std",
  "oracle_finite", "oracle_limit", "rel_err_finite", "rel_err_limit",
];

export function readComparisonCsv(text: string): ComparisonRow[] {
  const body = requireHeader(parseCsv(text), COMPARISON_HEADER, "comparison csv");
  return body.map(cells => ({
    kind: cells[0],
    n: num(cells[1], "n"),
    alpha: numOrNull(cells[2], "alpha"),
    eps: numOrNull(cells[3], "eps"),
    semantics: cells[4],
    rank: num(cells[5], "rank"),
    empMean: num(cells[6], "emp_mean"),
    empStd: numOrNull(cells[7], "emp_std"),
    oracleFinite: num(cells[8], "oracle_finite"),
    oracleLimit: num(cells[9], "oracle_limit"),
    relErrFinite: num(cells[10], "rel_err_finite"),
    relErrLimit: num(cells[11], "rel_err_limit"),
  }));
}

const DEGREE_HEADER = ["rank", "out_degree", "in_degree", "total_degree"];

export function readDegreesCsv(text: string): DegreeRow[] {
  const body = requireHeader(parseCsv(text), DEGREE_HEADER, "degrees csv");
  return body.map(cells => ({
    rank: num(cells[0], "rank"),
    outDegree: num(cells[1], "out_degree"),
    inDegree: num(cells[2], "in_degree"),
    totalDegree: num(cells[3], "total_degree"),
  }));
}

const ORACLE_HEADER = ["k", "j1_zero", "lambda_K", "lambda_M_truncN", "provenance"];

export function readOracleCsv(text: string): OracleRow[] {
  const body = requireHeader(parseCsv(text), ORACLE_HEADER, "oracle csv");
  return body.map(cells => ({
    k: num(cells[0], "k"),
    j1Zero: numOrNull(cells[1], "j1_zero"),
    lambdaK: numOrNull(cells[2], "lambda_K"),
    lambdaMTrunc: numOrNull(cells[3], "lambda_M_truncN"),
    provenance: cells[4],
  }));
}

export function readPowerLawFit(text: string): PowerLawFit {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch {
    throw new SchemaError("power-law fit: not valid JSON");
  }
  const fit = doc as PowerLawFit;
  if (typeof fit.fitted !== "boolean") throw new SchemaError("power-law fit: missing 'fitted'");
  if (fit.fitted && (typeof fit.ccdf_slope !== "number" || !fit.fit_range)) {
    throw new SchemaError("power-law fit: fitted=true but slope or range missing");
  }
  return fit;
}
