/**
 * Parsers for the two lpwalk CSV schemas.  '#'-prefixed lines are the
 * configuration echo and are skipped; everything else is validated strictly
 * and the first violation is reported with file name and line number.
 */

export const REPORT_HEADER = "law,p,n,d,m,replicate,seed,statistic,value";
export const AGGREGATE_HEADER = "law,p,n,d,m,statistic,median,mean,stderr,allowance";

export class SchemaViolation extends Error {}

export interface ReportRow {
  law: string;
  p: number;
  n: number;
  d: number;
  m: number;
  replicate: number;
  seed: number;
  statistic: string;
  value: number;
}

export interface AggregateRow {
  law: string;
  p: number;
  n: number;
  d: number;
  m: number;
  statistic: string;
  median: number;
  mean: number;
  stderr: number;
  allowance: number;
}

interface BodyLine {
  lineNo: number;
  fields: string[];
}

function bodyLines(text: string, name: string, header: string): BodyLine[] {
  const lines = text.split(/\r?\n/);
  const out: BodyLine[] = [];
  let headerSeen = false;
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line === "" || line.startsWith("#")) continue;
    if (!headerSeen) {
      if (line !== header) {
        throw new SchemaViolation(
          `${name}:${i + 1}: expected header '${header}' but found '${line}'`,
        );
      }
      headerSeen = true;
      continue;
    }
    out.push({ lineNo: i + 1, fields: line.split(",") });
  }
  if (!headerSeen) {
    throw new SchemaViolation(`${name}: no header line '${header}' found`);
  }
  return out;
}

function num(name: string, lineNo: number, column: string, raw: string): number {
  const v = Number(raw);
  if (raw.trim() === "" || !Number.isFinite(v)) {
    throw new SchemaViolation(
      `${name}:${lineNo}: column '${column}' is not a finite number: '${raw}'`,
    );
  }
  return v;
}

export function parseReport(text: string, name: string): ReportRow[] {
  const columns = REPORT_HEADER.split(",");
  return bodyLines(text, name, REPORT_HEADER).map(({ lineNo, fields }) => {
    if (fields.length !== columns.length) {
      throw new SchemaViolation(
        `${name}:${lineNo}: expected ${columns.length} columns, found ${fields.length}`,
      );
    }
    return {
      law: fields[0],
      p: num(name, lineNo, "p", fields[1]),
      n: num(name, lineNo, "n", fields[2]),
      d: num(name, lineNo, "d", fields[3]),
      m: num(name, lineNo, "m", fields[4]),
      replicate: num(name, lineNo, "replicate", fields[5]),
      seed: num(name, lineNo, "seed", fields[6]),
      statistic: fields[7],
      value: num(name, lineNo, "value", fields[8]),
    };
  });
}

export function parseAggregates(text: string, name: string): AggregateRow[] {
  const columns = AGGREGATE_HEADER.split(",");
  return bodyLines(text, name, AGGREGATE_HEADER).map(({ lineNo, fields }) => {
    if (fields.length !== columns.length) {
      throw new SchemaViolation(
        `${name}:${lineNo}: expected ${columns.length} columns, found ${fields.length}`,
      );
    }
    return {
      law: fields[0],
      p: num(name, lineNo, "p", fields[1]),
      n: num(name, lineNo, "n", fields[2]),
      d: num(name, lineNo, "d", fields[3]),
      m: num(name, lineNo, "m", fields[4]),
      statistic: fields[5],
      median: num(name, lineNo, "median", fields[6]),
      mean: num(name, lineNo, "mean", fields[7]),
      stderr: num(name, lineNo, "stderr", fields[8]),
      allowance: num(name, lineNo, "allowance", fields[9]),
    };
  });
}
