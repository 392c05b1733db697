/**
 * Figure assembly: one SVG per (law, p) group showing the replicate scatter
 * at 10% opacity, the aggregate median line, the discretization-allowance
 * band above it, and the fitted log-log slope annotation.
 */

import { readFileSync, writeFileSync } from "fs";

import {
  AggregateRow,
  ReportRow,
  SchemaViolation,
  parseAggregates,
  parseReport,
} from "./csv.js";
import { fitLogLogSlope } from "./slope.js";
import { circle, makeScale, polygon, polyline, text, tickLabel, ticks } from "./svg.js";

export interface FigureSpec {
  reportPath: string;
  aggregatePath: string;
  statistic: string;
  groupBy: string[]; // subset of ["law", "p"]
  outPath: string;
  logLog: boolean;
}

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { left: 70, right: 20, top: 40, bottom: 50 };

function groupKey(row: { law: string; p: number }, groupBy: string[]): string {
  const parts: string[] = [];
  if (groupBy.includes("law")) parts.push(row.law);
  if (groupBy.includes("p")) parts.push(`p=${row.p}`);
  return parts.join(", ") || "all";
}

function slug(key: string): string {
  return key.replace(/[^A-Za-z0-9.=-]+/g, "_");
}

export function renderFigure(
  label: string,
  statistic: string,
  scatter: ReportRow[],
  aggregates: AggregateRow[],
  logLog: boolean,
): string {
  const series = [...aggregates].sort((a, b) => a.n - b.n);
  const medians = series.map((a) => ({ x: a.n, y: a.median }));
  const bandTop = series.map((a) => ({ x: a.n, y: a.median + a.allowance }));

  const xsAll = [...scatter.map((r) => r.n), ...medians.map((q) => q.x)];
  const ysAll = [
    ...scatter.map((r) => r.value),
    ...medians.map((q) => q.y),
    ...bandTop.map((q) => q.y),
  ];
  const xPos = xsAll.filter((v) => v > 0);
  const yPos = ysAll.filter((v) => v > 0);
  if (logLog && (xPos.length === 0 || yPos.length === 0)) {
    throw new SchemaViolation(
      `statistic '${statistic}' has no positive values to place on log axes`,
    );
  }
  const xs = logLog ? xPos : xsAll;
  const ys = logLog ? yPos : ysAll;
  const pad = (lo: number, hi: number): [number, number] => {
    if (logLog) return [lo / 1.3, hi * 1.3];
    const w = hi - lo || Math.max(Math.abs(hi), 1);
    return [lo - 0.08 * w, hi + 0.08 * w];
  };
  const xDomain = pad(Math.min(...xs), Math.max(...xs));
  const yDomain = pad(Math.min(...ys), Math.max(...ys));
  const sx = makeScale(xDomain, [MARGIN.left, WIDTH - MARGIN.right], logLog);
  const sy = makeScale(yDomain, [HEIGHT - MARGIN.bottom, MARGIN.top], logLog);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);

  // axes
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  parts.push(polyline([[x0, y1], [x0, y0], [x1, y0]], "black", 1));
  for (const v of ticks(xDomain, logLog)) {
    const x = sx(v);
    parts.push(polyline([[x, y0], [x, y0 + 5]], "black", 1));
    parts.push(text(x, y0 + 20, tickLabel(v), "middle", 11));
  }
  for (const v of ticks(yDomain, logLog)) {
    if (logLog && v <= 0) continue;
    const y = sy(v);
    parts.push(polyline([[x0 - 5, y], [x0, y]], "black", 1));
    parts.push(text(x0 - 8, y + 4, tickLabel(v), "end", 11));
  }
  parts.push(text((x0 + x1) / 2, HEIGHT - 12, "n", "middle"));
  parts.push(text(14, (y0 + y1) / 2, statistic, "middle"));

  // allowance band between the median line and median + allowance
  if (series.length > 0) {
    const band: Array<[number, number]> = [
      ...medians.map((q) => [sx(q.x), sy(q.y)] as [number, number]),
      ...bandTop
        .slice()
        .reverse()
        .map((q) => [sx(q.x), sy(q.y)] as [number, number]),
    ];
    parts.push(polygon(band, "#4477aa", 0.15));
  }

  // replicate scatter at 10% opacity
  for (const row of scatter) {
    if (logLog && (row.n <= 0 || row.value <= 0)) continue;
    parts.push(circle(sx(row.n), sy(row.value), 3, "#222222", 0.1));
  }

  // aggregate median line (a lone point degenerates to a marker)
  if (medians.length > 1) {
    parts.push(
      polyline(
        medians.map((q) => [sx(q.x), sy(q.y)] as [number, number]),
        "#cc3311",
        2,
      ),
    );
  }
  for (const q of medians) {
    parts.push(circle(sx(q.x), sy(q.y), 4, "#cc3311", 1.0));
  }

  const fit = fitLogLogSlope(medians);
  const slopeText =
    fit === null ? "log-log slope: n/a" : `log-log slope: ${fit.slope.toFixed(3)}`;
  parts.push(text(x1, y1 - 10, slopeText, "end"));
  parts.push(text(x0, y1 - 10, `${label} - ${statistic}`, "start"));

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

export interface RenderedFile {
  group: string;
  path: string;
}

export function renderToFiles(spec: FigureSpec): RenderedFile[] {
  const report = parseReport(readFileSync(spec.reportPath, "ascii"), spec.reportPath);
  const aggregates = parseAggregates(
    readFileSync(spec.aggregatePath, "ascii"),
    spec.aggregatePath,
  );

  const scatter = report.filter((r) => r.statistic === spec.statistic);
  const aggRows = aggregates.filter((a) => a.statistic === spec.statistic);
  if (aggRows.length === 0) {
    throw new SchemaViolation(
      `${spec.aggregatePath}: statistic '${spec.statistic}' not present`,
    );
  }

  const groups = new Map<string, { scatter: ReportRow[]; agg: AggregateRow[] }>();
  for (const a of aggRows) {
    const key = groupKey(a, spec.groupBy);
    if (!groups.has(key)) groups.set(key, { scatter: [], agg: [] });
    groups.get(key)!.agg.push(a);
  }
  for (const r of scatter) {
    const key = groupKey(r, spec.groupBy);
    groups.get(key)?.scatter.push(r);
  }

  const multi = groups.size > 1;
  const out: RenderedFile[] = [];
  for (const [key, data] of groups) {
    const svg = renderFigure(key, spec.statistic, data.scatter, data.agg, spec.logLog);
    let path = spec.outPath;
    if (multi) {
      const dot = path.lastIndexOf(".");
      const stem = dot > 0 ? path.slice(0, dot) : path;
      const ext = dot > 0 ? path.slice(dot) : ".svg";
      path = `${stem}_${slug(key)}${ext}`;
    }
    writeFileSync(path, svg, "ascii");
    out.push({ group: key, path });
  }
  return out;
}
