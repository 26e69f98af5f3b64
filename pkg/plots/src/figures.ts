/** Figure rendering: latency violins and resource-sample line charts.
 *
 * Output is SVG. Rendering is a pure function of the input CSVs: fixed
 * palette, fixed layout, fixed number formatting — rerunning on identical
 * files yields identical bytes. No rows are ever dropped silently; every
 * figure's footer reports the parsed row count per labeled run, flagging
 * rows that hold -1 sampling sentinels.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { NoDataError, SpecError } from "./errors.js";
import {
  OPS_METRICS,
  RES_METRICS,
  loadRun,
  metricColumn,
  type Metric,
  type RunTable,
} from "./schema.js";
import { gaussianKde, median, niceTicks } from "./stats.js";
import { fmt, svgDocument, tag, textEl } from "./svg.js";

export interface FigureInput {
  label: string;
  path: string;
}

export type FigureStyle = "violin" | "line";

export interface FigureSpec {
  metric: Metric;
  inputs: FigureInput[];
  style: FigureStyle;
  output: string;
}

export interface RenderedFigure {
  output: string;
  /** Parsed data-row count per run label (equals the CSV row count). */
  rowCounts: Record<string, number>;
  /** Rows per label carrying -1 sampling sentinels (res figures only). */
  sentinelRows: Record<string, number>;
}

export interface RenderAllReport {
  files: string[];
  rowCounts: Record<string, Record<string, number>>;
  sentinelRows: Record<string, Record<string, number>>;
  warnings: string[];
}

/* ------------------------------------------------------------------ */
/* Layout and style constants                                          */
/* ------------------------------------------------------------------ */

const WIDTH = 840;
const HEIGHT = 560;
const MARGIN = { left: 90, right: 36, top: 64, bottom: 92 } as const;
const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

const PALETTE = ["#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2", "#9d755d"];

const TITLES: Record<Metric, string> = {
  keygen_us: "Key Generation Time",
  eval_us: "Evaluation Time",
  verify_us: "Verification Time",
  total_us: "Total Operation Time",
  mem_bytes: "Memory Usage",
  cpu_pct: "CPU Utilization",
};

function unitOf(metric: Metric): { label: string; scale: number } {
  if (metric === "mem_bytes") {
    return { label: "MB", scale: 1 / 1e6 };
  }
  if (metric === "cpu_pct") {
    return { label: "%", scale: 1 };
  }
  return { label: "µs", scale: 1 };
}

function color(i: number): string {
  return PALETTE[i % PALETTE.length]!;
}

function yPos(v: number, lo: number, hi: number): number {
  return MARGIN.top + PLOT_H - ((v - lo) / (hi - lo)) * PLOT_H;
}

function padDomain(lo: number, hi: number): [number, number] {
  const pad = hi > lo ? (hi - lo) * 0.05 : Math.max(Math.abs(hi) * 0.05, 1);
  return [lo - pad, hi + pad];
}

/* ------------------------------------------------------------------ */
/* Shared chrome                                                       */
/* ------------------------------------------------------------------ */

function chrome(metric: Metric, axisUnit: string, dLo: number, dHi: number): string[] {
  const body: string[] = [
    tag("rect", { x: 0, y: 0, width: WIDTH, height: HEIGHT, fill: "#ffffff" }),
    textEl(WIDTH / 2, 34, TITLES[metric], {
      "text-anchor": "middle",
      "font-size": 18,
      fill: "#111111",
    }),
  ];
  for (const t of niceTicks(dLo, dHi, 6)) {
    const y = yPos(t, dLo, dHi);
    body.push(
      tag("line", {
        x1: MARGIN.left,
        y1: y,
        x2: MARGIN.left + PLOT_W,
        y2: y,
        stroke: "#e0e0e0",
        "stroke-width": 1,
      }),
      textEl(MARGIN.left - 8, y + 4, fmt(t), {
        "text-anchor": "end",
        "font-size": 12,
        fill: "#444444",
      }),
    );
  }
  body.push(
    tag("line", {
      x1: MARGIN.left,
      y1: MARGIN.top,
      x2: MARGIN.left,
      y2: MARGIN.top + PLOT_H,
      stroke: "#444444",
      "stroke-width": 1,
    }),
    tag("line", {
      x1: MARGIN.left,
      y1: MARGIN.top + PLOT_H,
      x2: MARGIN.left + PLOT_W,
      y2: MARGIN.top + PLOT_H,
      stroke: "#444444",
      "stroke-width": 1,
    }),
    tag(
      "text",
      {
        x: 26,
        y: MARGIN.top + PLOT_H / 2,
        "text-anchor": "middle",
        "font-size": 13,
        fill: "#222222",
        transform: `rotate(-90 26 ${MARGIN.top + PLOT_H / 2})`,
      },
      `${metric} (${axisUnit})`,
    ),
  );
  return body;
}

function footer(inputs: FigureInput[], tables: RunTable[]): string {
  const parts = inputs.map((input, i) => {
    const t = tables[i]!;
    const sentinel = t.sentinelRows > 0 ? ` (${t.sentinelRows} sentinel)` : "";
    return `${input.label}=${t.rowCount}${sentinel}`;
  });
  return textEl(MARGIN.left, HEIGHT - 16, `rows: ${parts.join(", ")}`, {
    "font-size": 12,
    fill: "#555555",
  });
}

/* ------------------------------------------------------------------ */
/* Violin style                                                        */
/* ------------------------------------------------------------------ */

function violinBody(metric: Metric, inputs: FigureInput[], tables: RunTable[]): string[] {
  const unit = unitOf(metric);
  const series = tables.map((t) => metricColumn(t, metric).map((v) => v * unit.scale));
  const all = series.flat();
  const lo = Math.min(...all);
  const hi = Math.max(...all);
  const [dLo, dHi] = padDomain(lo, hi);

  const body = chrome(metric, unit.label, dLo, dHi);
  const slot = PLOT_W / series.length;
  const maxHalf = Math.min(slot * 0.42, 130);

  series.forEach((values, i) => {
    const cx = MARGIN.left + slot * (i + 0.5);
    const fill = color(i);
    const curve = gaussianKde(values, Math.min(...values), Math.max(...values));
    if (curve.degenerate) {
      const y = yPos(values[0]!, dLo, dHi);
      body.push(
        tag("line", {
          class: "violin",
          x1: cx - maxHalf * 0.6,
          y1: y,
          x2: cx + maxHalf * 0.6,
          y2: y,
          stroke: fill,
          "stroke-width": 4,
        }),
      );
    } else {
      const peak = Math.max(...curve.y);
      const right = curve.x.map((xv, j) => {
        const w = (curve.y[j]! / peak) * maxHalf;
        return `${(cx + w).toFixed(2)},${yPos(xv, dLo, dHi).toFixed(2)}`;
      });
      const left = [...curve.x.keys()].reverse().map((j) => {
        const w = (curve.y[j]! / peak) * maxHalf;
        return `${(cx - w).toFixed(2)},${yPos(curve.x[j]!, dLo, dHi).toFixed(2)}`;
      });
      body.push(
        tag("polygon", {
          class: "violin",
          points: [...right, ...left].join(" "),
          fill,
          "fill-opacity": "0.55",
          stroke: fill,
          "stroke-width": 1,
        }),
      );
    }
    const med = median(values);
    const my = yPos(med, dLo, dHi);
    body.push(
      tag("line", {
        x1: cx - maxHalf,
        y1: my,
        x2: cx + maxHalf,
        y2: my,
        stroke: "#222222",
        "stroke-width": 1.5,
      }),
      textEl(cx, my - 5, `median ${fmt(med)}`, {
        "text-anchor": "middle",
        "font-size": 10,
        fill: "#222222",
      }),
      textEl(cx, MARGIN.top + PLOT_H + 26, inputs[i]!.label, {
        "text-anchor": "middle",
        "font-size": 13,
        fill: "#222222",
      }),
    );
  });
  body.push(footer(inputs, tables));
  return body;
}

/* ------------------------------------------------------------------ */
/* Line style                                                          */
/* ------------------------------------------------------------------ */

function lineBody(metric: Metric, inputs: FigureInput[], tables: RunTable[]): string[] {
  const unit = unitOf(metric);
  const rawSeries = tables.map((t) => ({
    xs: t.columns["op_index"]!,
    raw: metricColumn(t, metric),
  }));

  const allX = rawSeries.flatMap((s) => s.xs);
  let xLo = Math.min(...allX);
  let xHi = Math.max(...allX);
  if (xLo === xHi) {
    xLo -= 1;
    xHi += 1;
  }
  const valid = rawSeries.flatMap((s) => s.raw.filter((v) => v !== -1)).map((v) => v * unit.scale);
  const [dLo, dHi] = valid.length > 0 ? padDomain(Math.min(...valid), Math.max(...valid)) : [0, 1];

  const body = chrome(metric, unit.label, dLo, dHi);
  const xPos = (x: number) => MARGIN.left + ((x - xLo) / (xHi - xLo)) * PLOT_W;

  for (const t of niceTicks(xLo, xHi, 6)) {
    if (t < xLo || t > xHi) {
      continue;
    }
    body.push(
      textEl(xPos(t), MARGIN.top + PLOT_H + 22, fmt(t), {
        "text-anchor": "middle",
        "font-size": 12,
        fill: "#444444",
      }),
    );
  }
  body.push(
    textEl(MARGIN.left + PLOT_W / 2, MARGIN.top + PLOT_H + 46, "op_index", {
      "text-anchor": "middle",
      "font-size": 13,
      fill: "#222222",
    }),
  );

  const totalPoints = rawSeries.reduce((a, s) => a + s.xs.length, 0);
  rawSeries.forEach((s, i) => {
    const stroke = color(i);
    let d = "";
    let pen = false;
    const dots: string[] = [];
    s.xs.forEach((x, j) => {
      const raw = s.raw[j]!;
      if (raw === -1) {
        pen = false; /* sentinel: break the line, never fabricate a point */
        return;
      }
      const pxx = xPos(x);
      const pyy = yPos(raw * unit.scale, dLo, dHi);
      d += `${pen ? "L" : "M"}${pxx.toFixed(2)} ${pyy.toFixed(2)}`;
      pen = true;
      if (totalPoints <= 300) {
        dots.push(tag("circle", { cx: pxx, cy: pyy, r: 2.5, fill: stroke }));
      }
    });
    if (d !== "") {
      body.push(
        tag("path", {
          class: "series",
          d,
          fill: "none",
          stroke,
          "stroke-width": 1.5,
        }),
      );
    } else {
      /* all samples were sentinels: keep an (empty) series marker so the
         figure still owns one series per label */
      body.push(tag("path", { class: "series", d: "", fill: "none", stroke }));
    }
    body.push(...dots);
    const ly = MARGIN.top + 16 + i * 20;
    const lx = MARGIN.left + PLOT_W - 150;
    body.push(
      tag("rect", { x: lx, y: ly - 10, width: 13, height: 13, fill: stroke }),
      textEl(lx + 19, ly + 1, inputs[i]!.label, { "font-size": 12, fill: "#222222" }),
    );
  });
  body.push(footer(inputs, tables));
  return body;
}

/* ------------------------------------------------------------------ */
/* Entry points                                                        */
/* ------------------------------------------------------------------ */

function validateSpec(spec: FigureSpec): void {
  if (spec.inputs.length === 0) {
    throw new SpecError(`figure ${spec.output}: at least one input CSV is required`);
  }
  const seen = new Set<string>();
  for (const input of spec.inputs) {
    if (seen.has(input.label)) {
      throw new SpecError(`figure ${spec.output}: duplicate run label ${JSON.stringify(input.label)}`);
    }
    seen.add(input.label);
  }
  if (spec.style !== "violin" && spec.style !== "line") {
    throw new SpecError(`figure ${spec.output}: unknown style ${JSON.stringify(spec.style)}`);
  }
}

/** Render one figure spec to its SVG string (no file written). */
export function renderSvg(spec: FigureSpec): { svg: string; tables: RunTable[] } {
  validateSpec(spec);
  const tables = spec.inputs.map((input) => loadRun(input.path));
  tables.forEach((t, i) => {
    if (t.rowCount === 0) {
      throw new NoDataError(`${t.path} (${spec.inputs[i]!.label}): no data rows to plot`);
    }
  });
  const body =
    spec.style === "violin"
      ? violinBody(spec.metric, spec.inputs, tables)
      : lineBody(spec.metric, spec.inputs, tables);
  return { svg: svgDocument(WIDTH, HEIGHT, body), tables };
}

/** Render one figure spec and write the image file. */
export function render(spec: FigureSpec): RenderedFigure {
  const { svg, tables } = renderSvg(spec);
  mkdirSync(dirname(spec.output), { recursive: true });
  writeFileSync(spec.output, svg, "utf8");
  const rowCounts: Record<string, number> = {};
  const sentinelRows: Record<string, number> = {};
  spec.inputs.forEach((input, i) => {
    rowCounts[input.label] = tables[i]!.rowCount;
    sentinelRows[input.label] = tables[i]!.sentinelRows;
  });
  return { output: spec.output, rowCounts, sentinelRows };
}

/** Render the full figure set: four latency violins from the ops CSVs and,
 *  when resource CSVs are given, memory and CPU line charts — six figures
 *  total, four plus a warning otherwise. */
export function renderAll(
  opsInputs: FigureInput[],
  resInputs: FigureInput[],
  outdir: string,
): RenderAllReport {
  if (opsInputs.length === 0) {
    throw new SpecError("at least one ops CSV is required");
  }
  const warnings: string[] = [];
  const specs: FigureSpec[] = OPS_METRICS.map((metric) => ({
    metric,
    inputs: opsInputs,
    style: "violin" as const,
    output: join(outdir, `${metric}.svg`),
  }));
  if (resInputs.length > 0) {
    specs.push(
      ...RES_METRICS.map((metric) => ({
        metric,
        inputs: resInputs,
        style: "line" as const,
        output: join(outdir, `${metric}.svg`),
      })),
    );
  } else {
    warnings.push("no resource CSVs given; rendering 4 of 6 figures (skipping mem_bytes, cpu_pct)");
  }

  const files: string[] = [];
  const rowCounts: Record<string, Record<string, number>> = {};
  const sentinelRows: Record<string, Record<string, number>> = {};
  for (const spec of specs) {
    const rendered = render(spec);
    files.push(rendered.output);
    rowCounts[rendered.output] = rendered.rowCounts;
    sentinelRows[rendered.output] = rendered.sentinelRows;
  }
  return { files, rowCounts, sentinelRows, warnings };
}
