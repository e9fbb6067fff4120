import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";
import {
  SchemaError,
  readComparisonCsv,
  readDegreesCsv,
  readOracleCsv,
  readPowerLawFit,
} from "../src/csv.js";
import {
  plotDegreeCcdf,
  plotEigenvalueDecay,
  plotKappaConvergence,
  plotSpectrumComparison,
} from "../src/figures.js";
import { render } from "../src/cli.js";

const load = (name: string) =>
  readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf8");

const comparison = () => readComparisonCsv(load("comparison.csv"));
const sweep = () => readComparisonCsv(load("sweep.csv"));
const degrees = () => readDegreesCsv(load("degrees_rep0.csv"));
const oracle = () => readOracleCsv(load("oracle.csv"));
const fit = () => readPowerLawFit(load("powerlaw_rep0.json"));

function expectSvg(svg: string): void {
  expect(svg.startsWith("<svg ")).toBe(true);
  expect(svg.endsWith("</svg>\n")).toBe(true);
  expect(svg).not.toMatch(/NaN|Infinity|undefined/);
}

describe("plotSpectrumComparison", () => {
  it("renders the single-size fixture", () => {
    const svg = plotSpectrumComparison(comparison());
    expectSvg(svg);
    expect(svg).toContain("mu spectrum vs oracles (remove)");
    expect(svg).toContain("n = 150");
    expect(svg).toContain("limit oracle");
    expect(svg).toContain("<polyline");
    expect(svg).toContain(">rank</text>");
  });

  it("draws one empirical curve per system size", () => {
    const svg = plotSpectrumComparison(sweep());
    expect(svg).toContain("n = 64");
    expect(svg).toContain("n = 128");
    expect(svg).toContain("n = 256");
  });

  it("rejects an empty row list", () => {
    expect(() => plotSpectrumComparison([])).toThrow(SchemaError);
  });

  it("is deterministic", () => {
    expect(plotSpectrumComparison(comparison())).toBe(plotSpectrumComparison(comparison()));
  });
});

describe("plotKappaConvergence", () => {
  it("renders the sweep fixture with the limit asymptote", () => {
    const svg = plotKappaConvergence(sweep());
    expectSvg(svg);
    expect(svg).toContain("top-atom convergence (remove)");
    expect(svg).toContain("limit 0.54489");
    expect(svg).toContain("finite-n oracle");
    expect(svg).toContain(">n</text>");
  });

  it("rejects rows with no rank-1 entries", () => {
    const rows = sweep().filter(r => r.rank !== 1);
    expect(() => plotKappaConvergence(rows)).toThrow(/no rank-1 rows/);
  });
});

describe("plotDegreeCcdf", () => {
  it("renders with the fitted slope overlay", () => {
    const svg = plotDegreeCcdf(degrees(), fit());
    expectSvg(svg);
    expect(svg).toContain("degree CCDF");
    expect(svg).toContain("fit slope -1.01");
    expect(svg).toContain("reference slope -1");
    expect(svg).toContain("P(D &gt;= d)");
  });

  it("renders without a fit and with an unfitted record", () => {
    const svgNone = plotDegreeCcdf(degrees(), null);
    expectSvg(svgNone);
    expect(svgNone).not.toContain("fit slope");
    const svgUnfitted = plotDegreeCcdf(degrees(), { fitted: false, reason: "degenerate" });
    expect(svgUnfitted).not.toContain("fit slope");
  });

  it("survives a constant degree sequence", () => {
    const rows = [1, 2, 3, 4].map(rank => ({
      rank,
      outDegree: 2,
      inDegree: 2,
      totalDegree: 4,
    }));
    const svg = plotDegreeCcdf(rows);
    expectSvg(svg);
    expect(svg).not.toContain("reference slope");
  });

  it("rejects rows with no positive degrees", () => {
    const rows = [{ rank: 1, outDegree: 0, inDegree: 0, totalDegree: 0 }];
    expect(() => plotDegreeCcdf(rows)).toThrow(/no positive values/);
    expect(() => plotDegreeCcdf([])).toThrow(/no rows/);
  });
});

describe("plotEigenvalueDecay", () => {
  it("renders the oracle fixture with the 8/pi^2 asymptote", () => {
    const svg = plotEigenvalueDecay(oracle());
    expectSvg(svg);
    expect(svg).toContain("eigenvalue decay");
    expect(svg).toContain("8 / pi^2");
    expect(svg).toContain("lambda_k k^2");
  });

  it("skips rows without lambda_K and rejects when none remain", () => {
    const rows = oracle();
    rows[0].lambdaK = null;
    const svg = plotEigenvalueDecay(rows);
    expectSvg(svg);
    expect(() => plotEigenvalueDecay(rows.map(r => ({ ...r, lambdaK: null })))).toThrow(
      /no lambda_K rows/,
    );
  });
});

describe("cli render dispatch", () => {
  it("routes each kind to its reader and figure", () => {
    expect(render("comparison", load("comparison.csv"), null)).toBe(
      plotSpectrumComparison(comparison()),
    );
    expect(render("convergence", load("sweep.csv"), null)).toBe(plotKappaConvergence(sweep()));
    expect(render("degree-ccdf", load("degrees_rep0.csv"), load("powerlaw_rep0.json"))).toBe(
      plotDegreeCcdf(degrees(), fit()),
    );
    expect(render("decay", load("oracle.csv"), null)).toBe(plotEigenvalueDecay(oracle()));
  });

  it("propagates schema errors from the readers", () => {
    expect(() => render("comparison", "", null)).toThrow(SchemaError);
  });
});
