/** Command-line front end.
 *
 * Exit codes: 0 success, 1 operational failure (unreadable or
 * schema-violating CSV, empty data), 2 usage error.
 */

import { parseArgs } from "node:util";
import { NoDataError, SchemaError, SpecError } from "./errors.js";
import { renderAll, type FigureInput } from "./figures.js";

export const USAGE = `usage: plots --ops FILE:LABEL [--ops FILE:LABEL ...]
             [--res FILE:LABEL ...] --outdir DIR

Renders benchmark CSV pairs to SVG figures: violin plots of the four
latency metrics (keygen_us, eval_us, verify_us, total_us) from the ops
CSVs, and line charts of mem_bytes / cpu_pct from the res CSVs. Without
--res, the four latency figures are rendered and a warning is printed.`;

export interface Io {
  out: (line: string) => void;
  err: (line: string) => void;
}

const CONSOLE_IO: Io = {
  out: (line) => console.log(line),
  err: (line) => console.error(line),
};

class UsageError extends Error {}

function splitToken(token: string, flag: string): FigureInput {
  const cut = token.lastIndexOf(":");
  if (cut <= 0 || cut === token.length - 1) {
    throw new UsageError(`${flag} expects FILE:LABEL, got ${JSON.stringify(token)}`);
  }
  return { path: token.slice(0, cut), label: token.slice(cut + 1) };
}

export function runCli(argv: string[], io: Io = CONSOLE_IO): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      options: {
        ops: { type: "string", multiple: true },
        res: { type: "string", multiple: true },
        outdir: { type: "string" },
        help: { type: "boolean", short: "h" },
      },
      allowPositionals: false,
    });
  } catch (exc) {
    io.err(`error: ${(exc as Error).message}`);
    io.err(USAGE);
    return 2;
  }

  const { values } = parsed;
  if (values.help) {
    io.out(USAGE);
    return 0;
  }

  try {
    if (!values.ops || values.ops.length === 0) {
      throw new UsageError("at least one --ops FILE:LABEL is required");
    }
    if (!values.outdir) {
      throw new UsageError("--outdir DIR is required");
    }
    const opsInputs = values.ops.map((t) => splitToken(t, "--ops"));
    const resInputs = (values.res ?? []).map((t) => splitToken(t, "--res"));

    const report = renderAll(opsInputs, resInputs, values.outdir);
    for (const warning of report.warnings) {
      io.err(`warning: ${warning}`);
    }
    for (const file of report.files) {
      const counts = Object.entries(report.rowCounts[file]!).map(([label, n]) => {
        const sentinel = report.sentinelRows[file]![label]!;
        return `${label}=${n}${sentinel > 0 ? ` (${sentinel} sentinel)` : ""}`;
      });
      io.out(`wrote ${file} (rows: ${counts.join(", ")})`);
    }
    return 0;
  } catch (exc) {
    if (exc instanceof UsageError || exc instanceof SpecError) {
      io.err(`error: ${exc.message}`);
      io.err(USAGE);
      return 2;
    }
    if (exc instanceof SchemaError || exc instanceof NoDataError || exc instanceof Error) {
      io.err(`error: ${(exc as Error).message}`);
      return 1;
    }
    throw exc;
  }
}
