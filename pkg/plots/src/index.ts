export { NoDataError, SchemaError, SpecError } from "./errors.js";
export {
  OPS_HEADER,
  OPS_METRICS,
  RES_HEADER,
  RES_METRICS,
  loadRun,
  loadRuns,
  metricColumn,
} from "./schema.js";
export type { Metric, OpsMetric, ResMetric, RunTable, TableKind } from "./schema.js";
export { gaussianKde, median, nearestRank, niceTicks } from "./stats.js";
export { render, renderAll, renderSvg } from "./figures.js";
export type {
  FigureInput,
  FigureSpec,
  FigureStyle,
  RenderAllReport,
  RenderedFigure,
} from "./figures.js";
export { runCli } from "./cli.js";
