import { mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";

import { AGGREGATE_HEADER, REPORT_HEADER, SchemaViolation, parseAggregates, parseReport } from "../src/csv.js";
import { renderFigure, renderToFiles } from "../src/render.js";
import { fitLogLogSlope } from "../src/slope.js";
import { main, parseArgs } from "../src/cli.js";

const FIXTURES = join(__dirname, "fixtures");

/** Synthetic sweep where the statistic equals c * n^{-1/2} exactly. */
function syntheticCsvPair(c = 2.0): { report: string; aggregate: string } {
  const ns = [100, 400, 1600, 6400];
  const reportLines = [REPORT_HEADER];
  const aggLines = [AGGREGATE_HEADER];
  for (const n of ns) {
    const value = c / Math.sqrt(n);
    for (let rep = 0; rep < 5; rep++) {
      reportLines.push(
        `rademacher,2,${n},${n},32,${rep},${rep},sup_difference,${value.toPrecision(17)}`,
      );
    }
    aggLines.push(
      `rademacher,2,${n},${n},32,sup_difference,${value.toPrecision(17)},` +
        `${value.toPrecision(17)},0,0.01`,
    );
  }
  return { report: reportLines.join("\n") + "\n", aggregate: aggLines.join("\n") + "\n" };
}

function writePair(dir: string, pair: { report: string; aggregate: string }) {
  const reportPath = join(dir, "report.csv");
  const aggregatePath = join(dir, "agg.csv");
  writeFileSync(reportPath, pair.report);
  writeFileSync(aggregatePath, pair.aggregate);
  return { reportPath, aggregatePath };
}

describe("slope fit", () => {
  it("recovers the exact exponent of c n^{-1/2}", () => {
    const pts = [100, 400, 1600].map((n) => ({ x: n, y: 2.0 / Math.sqrt(n) }));
    const fit = fitLogLogSlope(pts);
    expect(fit).not.toBeNull();
    expect(Math.abs(fit!.slope + 0.5)).toBeLessThan(1e-12);
  });

  it("returns null without two positive points", () => {
    expect(fitLogLogSlope([{ x: 10, y: 1 }])).toBeNull();
    expect(fitLogLogSlope([{ x: 10, y: -1 }, { x: 20, y: -2 }])).toBeNull();
  });
});

describe("acceptance: synthetic c n^{-1/2} report", () => {
  it("annotates log-log slope -0.5 within 0.01", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const { reportPath, aggregatePath } = writePair(dir, syntheticCsvPair());
    const files = renderToFiles({
      reportPath,
      aggregatePath,
      statistic: "sup_difference",
      groupBy: ["law", "p"],
      outPath: join(dir, "fig.svg"),
      logLog: true,
    });
    expect(files).toHaveLength(1);
    const svg = readFileSync(files[0].path, "ascii");
    const match = svg.match(/log-log slope: (-?\d+\.\d+)/);
    expect(match).not.toBeNull();
    expect(Math.abs(Number(match![1]) + 0.5)).toBeLessThanOrEqual(0.01);
  });

  it("identical input yields identical image bytes", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const { reportPath, aggregatePath } = writePair(dir, syntheticCsvPair());
    const spec = {
      reportPath,
      aggregatePath,
      statistic: "sup_difference",
      groupBy: ["law", "p"],
      outPath: join(dir, "fig.svg"),
      logLog: true,
    };
    renderToFiles(spec);
    const first = readFileSync(spec.outPath, "ascii");
    renderToFiles(spec);
    const second = readFileSync(spec.outPath, "ascii");
    expect(second).toBe(first);
  });
});

describe("rendering edge cases", () => {
  it("renders a single aggregate row without crashing", () => {
    const report = `${REPORT_HEADER}\nrademacher,2,100,100,32,0,0,sup_norm,0.25\n`;
    const aggregate = `${AGGREGATE_HEADER}\nrademacher,2,100,100,32,sup_norm,0.25,0.25,0,0.05\n`;
    const svg = renderFigure(
      "rademacher, p=2",
      "sup_norm",
      parseReport(report, "inline"),
      parseAggregates(aggregate, "inline"),
      false,
    );
    expect(svg).toContain("log-log slope: n/a");
    expect(svg).toContain("<circle");
  });

  it("splits groups into one file each", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const pair = syntheticCsvPair();
    const extraReport = pair.report + "uniform,1,100,100,32,0,40,sup_difference,0.3\n";
    const extraAgg = pair.aggregate + "uniform,1,100,100,32,sup_difference,0.3,0.3,0,0.01\n";
    const { reportPath, aggregatePath } = writePair(dir, {
      report: extraReport,
      aggregate: extraAgg,
    });
    const files = renderToFiles({
      reportPath,
      aggregatePath,
      statistic: "sup_difference",
      groupBy: ["law", "p"],
      outPath: join(dir, "fig.svg"),
      logLog: false,
    });
    expect(files).toHaveLength(2);
    expect(new Set(files.map((f) => f.path)).size).toBe(2);
  });
});

describe("schema validation", () => {
  it("names the first violation", () => {
    expect(() => parseReport("law,p,oops\n", "bad.csv")).toThrowError(/bad\.csv:1: expected header/);
    const text = `${REPORT_HEADER}\nrademacher,2,100,100,32,0,0,sup_norm,xyz\n`;
    expect(() => parseReport(text, "bad.csv")).toThrowError(
      /bad\.csv:2: column 'value' is not a finite number: 'xyz'/,
    );
  });

  it("rejects a missing statistic by name", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const { reportPath, aggregatePath } = writePair(dir, syntheticCsvPair());
    expect(() =>
      renderToFiles({
        reportPath,
        aggregatePath,
        statistic: "nope",
        groupBy: ["law"],
        outPath: join(dir, "fig.svg"),
        logLog: false,
      }),
    ).toThrowError(SchemaViolation);
  });
});

describe("cli", () => {
  it("parses the documented flag set", () => {
    const spec = parseArgs([
      "--report", "r.csv", "--aggregate", "a.csv", "--stat", "sup_difference",
      "--group", "law,p", "--out", "fig.svg", "--loglog",
    ]);
    expect(spec.statistic).toBe("sup_difference");
    expect(spec.logLog).toBe(true);
  });

  it("usage errors exit 2, schema errors exit 1", () => {
    expect(main(["--stat", "x"])).toBe(2);
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "not,a,header\n");
    expect(
      main(["--report", bad, "--aggregate", bad, "--stat", "s", "--out", join(dir, "f.svg")]),
    ).toBe(1);
  });
});

describe("real sweep fixture from the simulation side", () => {
  it("parses and renders the checked-in report pair", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const files = renderToFiles({
      reportPath: join(FIXTURES, "real_report.csv"),
      aggregatePath: join(FIXTURES, "real_report_aggregates.csv"),
      statistic: "sup_difference",
      groupBy: ["law", "p"],
      outPath: join(dir, "real.svg"),
      logLog: true,
    });
    expect(files).toHaveLength(2); // p = 1 and p = 2 groups
    for (const file of files) {
      const svg = readFileSync(file.path, "ascii");
      const match = svg.match(/log-log slope: (-?\d+\.\d+)/);
      expect(match).not.toBeNull();
      expect(Number(match![1])).toBeLessThan(0); // medians fall along the sweep
    }
  });
});
