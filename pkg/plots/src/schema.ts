/** Loading and validation of the benchmark harness's CSV outputs.
 *
 * Two file kinds exist, identified by their exact headers:
 *   ops: op_index,keygen_us,eval_us,verify_us,total_us   (per-op latencies, µs)
 *   res: op_index,mem_bytes,cpu_pct                      (resource samples)
 *
 * Every cell is a base-10 integer. Resource columns may hold -1 sentinels
 * (sampling failed for that row); such rows are retained and counted in
 * `sentinelRows`, never dropped.
 */

import { readFileSync } from "node:fs";
import Papa from "papaparse";
import { SchemaError } from "./errors.js";

export const OPS_HEADER = [
  "op_index",
  "keygen_us",
  "eval_us",
  "verify_us",
  "total_us",
] as const;
export const RES_HEADER = ["op_index", "mem_bytes", "cpu_pct"] as const;

export const OPS_METRICS = ["keygen_us", "eval_us", "verify_us", "total_us"] as const;
export const RES_METRICS = ["mem_bytes", "cpu_pct"] as const;

export type OpsMetric = (typeof OPS_METRICS)[number];
export type ResMetric = (typeof RES_METRICS)[number];
export type Metric = OpsMetric | ResMetric;

export type TableKind = "ops" | "res";

/** One parsed CSV, column-major. */
export interface RunTable {
  kind: TableKind;
  path: string;
  rowCount: number;
  columns: Record<string, number[]>;
  /** Rows where any resource column holds the -1 sentinel (res tables only). */
  sentinelRows: number;
}

const INT_RE = /^-?\d+$/;

function expectedHeaderFor(actual: string[]): readonly string[] {
  if (actual.length === RES_HEADER.length) {
    return RES_HEADER;
  }
  return OPS_HEADER;
}

function checkHeader(actual: string[], path: string): TableKind {
  const matches = (expected: readonly string[]) =>
    actual.length === expected.length && expected.every((name, i) => actual[i] === name);
  if (matches(OPS_HEADER)) {
    return "ops";
  }
  if (matches(RES_HEADER)) {
    return "res";
  }
  const expected = expectedHeaderFor(actual);
  for (let i = 0; i < Math.max(actual.length, expected.length); i++) {
    const want = expected[i];
    const got = actual[i];
    if (want === undefined) {
      throw new SchemaError(
        got ?? "",
        `${path}: unexpected extra column ${JSON.stringify(got)} at position ${i + 1}`,
      );
    }
    if (got !== want) {
      throw new SchemaError(
        want,
        `${path}: header column ${i + 1}: expected ${JSON.stringify(want)}, got ${
          got === undefined ? "nothing" : JSON.stringify(got)
        }`,
      );
    }
  }
  /* unreachable: some column must have differed */
  throw new SchemaError(expected[0] ?? "", `${path}: header does not match the bench schema`);
}

/** Parse one bench CSV, inferring its kind from the header. */
export function loadRun(path: string): RunTable {
  const text = readFileSync(path, "utf8");
  if (text.trim() === "") {
    throw new SchemaError(OPS_HEADER[0], `${path}: empty file, expected a header row`);
  }
  const parsed = Papa.parse<string[]>(text, { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0]!;
    throw new SchemaError("", `${path}: unparseable CSV: ${first.message}`);
  }
  const rows = parsed.data;
  if (rows.length === 0) {
    throw new SchemaError(OPS_HEADER[0], `${path}: empty file, expected a header row`);
  }
  const kind = checkHeader(rows[0]!, path);
  const header = kind === "ops" ? OPS_HEADER : RES_HEADER;

  const columns: Record<string, number[]> = {};
  for (const name of header) {
    columns[name] = [];
  }
  for (let r = 1; r < rows.length; r++) {
    const row = rows[r]!;
    if (row.length !== header.length) {
      const offending = header[Math.min(row.length, header.length - 1)]!;
      throw new SchemaError(
        offending,
        `${path}: row ${r}: expected ${header.length} cells, got ${row.length}`,
      );
    }
    for (let c = 0; c < header.length; c++) {
      const cell = row[c]!;
      const name = header[c]!;
      if (!INT_RE.test(cell)) {
        throw new SchemaError(
          name,
          `${path}: row ${r}, column ${name}: ${JSON.stringify(cell)} is not an integer`,
        );
      }
      columns[name]!.push(Number(cell));
    }
  }

  const rowCount = rows.length - 1;
  let sentinelRows = 0;
  if (kind === "res") {
    for (let i = 0; i < rowCount; i++) {
      if (RES_METRICS.some((m) => columns[m]![i] === -1)) {
        sentinelRows++;
      }
    }
  }
  return { kind, path, rowCount, columns, sentinelRows };
}

/** Parse several bench CSVs; row counts and order are preserved. */
export function loadRuns(paths: string[]): RunTable[] {
  return paths.map(loadRun);
}

/** Extract one metric column, or fail naming the metric. */
export function metricColumn(table: RunTable, metric: string): number[] {
  const column = table.columns[metric];
  if (column === undefined || metric === "op_index") {
    throw new SchemaError(
      metric,
      `${table.path}: metric ${JSON.stringify(metric)} is not in the ${table.kind} schema`,
    );
  }
  return column;
}
