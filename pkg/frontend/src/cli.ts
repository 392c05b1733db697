#!/usr/bin/env node
/**
 * plots --report <csv> --aggregate <csv> --stat sup_difference \
 *       --group law,p --out fig.svg [--loglog]
 *
 * Exit codes: 0 success, 1 schema violation (first violation named), 2 usage.
 */

import { pathToFileURL } from "url";

import { SchemaViolation } from "./csv.js";
import { FigureSpec, renderToFiles } from "./render.js";

const USAGE =
  "usage: plots --report <csv> --aggregate <csv> --stat <name> " +
  "[--group law,p] [--out <path>] [--loglog]";

export function parseArgs(argv: string[]): FigureSpec {
  const opts = new Map<string, string>();
  let logLog = false;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--loglog") {
      logLog = true;
    } else if (arg.startsWith("--")) {
      const value = argv[i + 1];
      if (value === undefined || value.startsWith("--")) {
        throw new UsageError(`missing value for ${arg}`);
      }
      opts.set(arg.slice(2), value);
      i++;
    } else {
      throw new UsageError(`unexpected argument '${arg}'`);
    }
  }
  const known = new Set(["report", "aggregate", "stat", "group", "out"]);
  for (const key of opts.keys()) {
    if (!known.has(key)) throw new UsageError(`unknown flag --${key}`);
  }
  for (const required of ["report", "aggregate", "stat"]) {
    if (!opts.has(required)) throw new UsageError(`--${required} is required`);
  }
  const groupBy = (opts.get("group") ?? "law,p").split(",").map((s) => s.trim());
  for (const g of groupBy) {
    if (g !== "law" && g !== "p") throw new UsageError(`unknown group key '${g}'`);
  }
  return {
    reportPath: opts.get("report")!,
    aggregatePath: opts.get("aggregate")!,
    statistic: opts.get("stat")!,
    groupBy,
    outPath: opts.get("out") ?? "figure.svg",
    logLog,
  };
}

export class UsageError extends Error {}

export function main(argv: string[]): number {
  let spec: FigureSpec;
  try {
    spec = parseArgs(argv);
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(`plots: ${err.message}`);
      console.error(USAGE);
      return 2;
    }
    throw err;
  }
  try {
    for (const file of renderToFiles(spec)) {
      console.log(`${file.group} -> ${file.path}`);
    }
    return 0;
  } catch (err) {
    if (err instanceof SchemaViolation) {
      console.error(`plots: ${err.message}`);
      return 1;
    }
    if (err instanceof Error && "code" in err) {
      console.error(`plots: ${err.message}`);
      return 1;
    }
    throw err;
  }
}

const entry = process.argv[1];
if (entry !== undefined && import.meta.url === pathToFileURL(entry).href) {
  process.exit(main(process.argv.slice(2)));
}
