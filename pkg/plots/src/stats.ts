/** Order statistics and density estimation used by the figures. */

/** Nearest-rank percentile over an ascending-sorted array (1-indexed rank
 *  ceil(p/100·n), floored at 1) — the same convention the harness uses, so
 *  medians drawn on figures match its summary tables. */
export function nearestRank(sorted: number[], pct: number): number {
  if (sorted.length === 0) {
    throw new RangeError("nearestRank over empty data");
  }
  const rank = Math.max(1, Math.ceil((pct / 100) * sorted.length));
  return sorted[rank - 1]!;
}

export function median(values: number[]): number {
  const sorted = [...values].sort((a, b) => a - b);
  return nearestRank(sorted, 50);
}

export interface DensityCurve {
  /** Metric-axis positions the density was evaluated at. */
  x: number[];
  /** Density values, same length as x. */
  y: number[];
  /** True when every input value was identical (no spread to estimate). */
  degenerate: boolean;
}

/** Gaussian kernel density estimate over `points` evenly spaced positions
 *  spanning [lo, hi]. Bandwidth by Silverman's rule of thumb. */
export function gaussianKde(
  values: number[],
  lo: number,
  hi: number,
  points = 81,
): DensityCurve {
  if (values.length === 0) {
    throw new RangeError("gaussianKde over empty data");
  }
  const n = values.length;
  const mean = values.reduce((a, b) => a + b, 0) / n;
  const variance = values.reduce((a, b) => a + (b - mean) ** 2, 0) / n;
  const std = Math.sqrt(variance);

  const x: number[] = [];
  for (let i = 0; i < points; i++) {
    x.push(points === 1 ? lo : lo + ((hi - lo) * i) / (points - 1));
  }

  if (std === 0 || hi === lo) {
    return { x, y: x.map(() => 0), degenerate: true };
  }

  const sorted = [...values].sort((a, b) => a - b);
  const iqr = nearestRank(sorted, 75) - nearestRank(sorted, 25);
  const sigma = iqr > 0 ? Math.min(std, iqr / 1.34) : std;
  const bandwidth = 0.9 * sigma * Math.pow(n, -0.2);

  const inv = 1 / (n * bandwidth * Math.sqrt(2 * Math.PI));
  const y = x.map((xi) => {
    let acc = 0;
    for (const v of values) {
      const u = (xi - v) / bandwidth;
      acc += Math.exp(-0.5 * u * u);
    }
    return acc * inv;
  });
  return { x, y, degenerate: false };
}

/** Round-valued axis ticks covering [lo, hi] (roughly `count` of them). */
export function niceTicks(lo: number, hi: number, count = 5): number[] {
  if (!(hi > lo)) {
    return [lo];
  }
  const rawStep = (hi - lo) / Math.max(1, count);
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const norm = rawStep / mag;
  const niceNorm = norm < 1.5 ? 1 : norm < 3 ? 2 : norm < 7 ? 5 : 10;
  const step = niceNorm * mag;
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let t = start; t <= hi + step * 1e-9; t += step) {
    /* snap to the grid to keep long float runs from drifting */
    ticks.push(Math.round(t / step) * step);
  }
  return ticks;
}
