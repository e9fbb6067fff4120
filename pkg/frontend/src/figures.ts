/** The four figure kinds. Input rows come straight from the CSV readers;
 * nothing is recomputed beyond plot geometry. */

import {
  ComparisonRow,
  DegreeRow,
  OracleRow,
  PowerLawFit,
  SchemaError,
} from "./csv.js";
import {
  HEIGHT,
  MARGIN,
  WIDTH,
  axes,
  circle,
  document,
  line,
  linearScale,
  logScale,
  polyline,
  text,
} from "./svg.js";

const COLORS = ["#1f6fb2", "#c0392b", "#1e8449", "#8e44ad", "#b9770e", "#17777a"];

const X0 = MARGIN.left;
const X1 = WIDTH - MARGIN.right;
const Y0 = HEIGHT - MARGIN.bottom;
const Y1 = MARGIN.top;

function legend(entries: Array<[string, string]>): string {
  return entries
    .map(([label, color], i) => {
      const y = Y1 + 14 + 16 * i;
      return line(X1 - 150, y - 4, X1 - 128, y - 4, color) + "\n" + text(X1 - 122, y, label, "start");
    })
    .join("\n");
}

function positive(values: number[], what: string): number[] {
  const pos = values.filter(v => v > 0);
  if (pos.length === 0) throw new SchemaError(`${what}: no positive values to plot`);
  return pos;
}

/** Rank plot of empirical atoms (mean, whiskers when dispersion is present)
 * against the finite-n and limit oracles; one curve per system size. */
export function plotSpectrumComparison(rows: ComparisonRow[]): string {
  if (rows.length === 0) throw new SchemaError("comparison: no rows");
  const sizes = [...new Set(rows.map(r => r.n))].sort((a, b) => a - b);
  const ranks = rows.map(r => r.rank);
  const yVals = positive(
    rows.flatMap(r => [r.empMean, r.oracleFinite, r.oracleLimit]),
    "comparison",
  );
  const yMin = Math.min(...yVals);
  const x = linearScale(Math.min(...ranks), Math.max(...ranks), X0, X1);
  const y = logScale(yMin * 0.8, Math.max(...yVals) * 1.25, Y0, Y1);

  const parts: string[] = [];
  sizes.forEach((n, si) => {
    const color = COLORS[si % COLORS.length];
    const group = rows.filter(r => r.n === n).sort((a, b) => a.rank - b.rank);
    parts.push(polyline(group.map(r => [x(r.rank), y(r.empMean)]), color));
    for (const r of group) {
      parts.push(circle(x(r.rank), y(r.empMean), 3, color));
      if (r.empStd !== null && r.empStd > 0) {
        const lo = Math.max(r.empMean - r.empStd, yMin * 0.8); // keep whiskers on the log axis
        parts.push(line(x(r.rank), y(lo), x(r.rank), y(r.empMean + r.empStd), color));
      }
    }
    parts.push(
      polyline(group.map(r => [x(r.rank), y(r.oracleFinite)]), color, "4 3"),
    );
  });
  const head = rows[0];
  const limitGroup = rows
    .filter(r => r.n === sizes[sizes.length - 1])
    .sort((a, b) => a.rank - b.rank);
  parts.push(polyline(limitGroup.map(r => [x(r.rank), y(r.oracleLimit)]), "#444", "1 3"));

  const entries: Array<[string, string]> = sizes.map((n, i) => [
    `n = ${n}`,
    COLORS[i % COLORS.length],
  ]);
  entries.push(["limit oracle", "#444"]);
  parts.push(legend(entries));
  parts.push(axes(x, y, "rank", `${head.kind} atom`));
  return document(
    `${head.kind} spectrum vs oracles (${head.semantics})`,
    parts.join("\n"),
  );
}

/** Top-atom convergence across the size grid with the limit value drawn as a
 * horizontal asymptote. */
export function plotKappaConvergence(rows: ComparisonRow[]): string {
  const top = rows.filter(r => r.rank === 1).sort((a, b) => a.n - b.n);
  if (top.length === 0) throw new SchemaError("sweep: no rank-1 rows");
  const x = logScale(top[0].n / 1.3, top[top.length - 1].n * 1.3, X0, X1);
  const yVals = top.flatMap(r => [r.empMean, r.oracleFinite, r.oracleLimit]);
  const y = linearScale(0, Math.max(...yVals) * 1.15, Y0, Y1);

  const parts: string[] = [];
  const limit = top[0].oracleLimit;
  parts.push(line(X0, y(limit), X1, y(limit), "#444", "1 3"));
  parts.push(text(X1 - 4, y(limit) - 6, `limit ${limit.toPrecision(5)}`, "end", 10));
  parts.push(polyline(top.map(r => [x(r.n), y(r.empMean)]), COLORS[0]));
  for (const r of top) {
    parts.push(circle(x(r.n), y(r.empMean), 3, COLORS[0]));
    if (r.empStd !== null && r.empStd > 0) {
      const lo = Math.max(r.empMean - r.empStd, 0);
      parts.push(line(x(r.n), y(lo), x(r.n), y(r.empMean + r.empStd), COLORS[0]));
    }
    parts.push(circle(x(r.n), y(r.oracleFinite), 3, COLORS[1]));
  }
  parts.push(
    legend([
      ["empirical top atom", COLORS[0]],
      ["finite-n oracle", COLORS[1]],
      ["limit oracle", "#444"],
    ]),
  );
  parts.push(axes(x, y, "n", `top ${top[0].kind} atom`));
  return document(`top-atom convergence (${top[0].semantics})`, parts.join("\n"));
}

/** Log-log degree CCDF as a step curve, with the fitted slope and the
 * reference slope -1 overlaid. */
export function plotDegreeCcdf(rows: DegreeRow[], fit: PowerLawFit | null = null): string {
  if (rows.length === 0) throw new SchemaError("degrees: no rows");
  const degrees = positive(rows.map(r => r.totalDegree), "degrees").sort((a, b) => a - b);
  const nTotal = degrees.length;
  const uniq: number[] = [];
  const ccdf: number[] = [];
  for (let i = 0; i < nTotal; i++) {
    if (i === 0 || degrees[i] !== degrees[i - 1]) {
      uniq.push(degrees[i]);
      ccdf.push(1 - i / nTotal); // P(D >= d), left-continuous step
    }
  }
  const x = logScale(uniq[0], uniq[uniq.length - 1], X0, X1);
  const y = logScale(Math.max(ccdf[ccdf.length - 1] * 0.8, 1e-12), 1.2, Y0, Y1);

  const step: Array<[number, number]> = [];
  for (let i = 0; i < uniq.length; i++) {
    step.push([x(uniq[i]), y(ccdf[i])]);
    if (i + 1 < uniq.length) step.push([x(uniq[i + 1]), y(ccdf[i])]);
  }
  const parts: string[] = [polyline(step, COLORS[0])];

  const entries: Array<[string, string]> = [["empirical CCDF", COLORS[0]]];
  const drawSlope = (slope: number, anchor: number, color: string, dash: string) => {
    // line through (anchor, ccdf(anchor)) with the given log-log slope
    let idx = uniq.findIndex(v => v >= anchor);
    if (idx < 0) idx = uniq.length - 1;
    const [vx, vy] = [uniq[idx], ccdf[idx]];
    const lo = uniq[0];
    const hi = uniq[uniq.length - 1];
    const at = (v: number) => vy * (v / vx) ** slope;
    parts.push(polyline([[x(lo), y(at(lo))], [x(hi), y(at(hi))]], color, dash));
  };
  if (fit && fit.fitted && typeof fit.ccdf_slope === "number" && fit.fit_range) {
    drawSlope(fit.ccdf_slope, Math.sqrt(fit.fit_range[0] * fit.fit_range[1]), COLORS[1], "4 3");
    entries.push([`fit slope ${fit.ccdf_slope.toFixed(2)}`, COLORS[1]]);
  }
  if (uniq.length > 1) {
    drawSlope(-1, Math.sqrt(uniq[0] * uniq[uniq.length - 1]), "#444", "1 3");
    entries.push(["reference slope -1", "#444"]);
  }
  parts.push(legend(entries));
  parts.push(axes(x, y, "total degree d", "P(D >= d)"));
  return document("degree CCDF", parts.join("\n"));
}

/** lambda_k k^2 against k: the decay-law plateau at 8 / pi^2. */
export function plotEigenvalueDecay(rows: OracleRow[]): string {
  const usable = rows
    .filter(r => r.lambdaK !== null)
    .sort((a, b) => a.k - b.k);
  if (usable.length === 0) throw new SchemaError("oracle: no lambda_K rows");
  const ks = usable.map(r => r.k);
  const vals = usable.map(r => (r.lambdaK as number) * r.k * r.k);
  const asymptote = 8 / Math.PI ** 2;
  const x = linearScale(ks[0], ks[ks.length - 1], X0, X1);
  const y = linearScale(0, Math.max(...vals, asymptote) * 1.15, Y0, Y1);

  const parts: string[] = [];
  parts.push(line(X0, y(asymptote), X1, y(asymptote), "#444", "1 3"));
  parts.push(text(X1 - 4, y(asymptote) - 6, "8 / pi^2", "end", 10));
  parts.push(polyline(usable.map((r, i) => [x(r.k), y(vals[i])]), COLORS[0]));
  for (let i = 0; i < usable.length; i++) {
    parts.push(circle(x(usable[i].k), y(vals[i]), 2.5, COLORS[0]));
  }
  parts.push(legend([["lambda_k k^2", COLORS[0]], ["asymptote", "#444"]]));
  parts.push(axes(x, y, "k", "lambda_k k^2"));
  return document("eigenvalue decay toward 8 / (pi^2 k^2)", parts.join("\n"));
}
