/** Fixture builders: synthetic CSVs in the harness's exact wire format
 *  (header row + integer cells, CRLF line endings). */

import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export function tempDir(): string {
  return mkdtempSync(join(tmpdir(), "plots-"));
}

/** Small deterministic PRNG so fixtures are reproducible across runs. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function csvText(header: string[], rows: number[][]): string {
  const lines = [header.join(","), ...rows.map((r) => r.join(","))];
  return lines.join("\r\n") + "\r\n";
}

export function writeOpsCsv(path: string, rows: number[][]): void {
  writeFileSync(path, csvText(["op_index", "keygen_us", "eval_us", "verify_us", "total_us"], rows));
}

export function writeResCsv(path: string, rows: number[][]): void {
  writeFileSync(path, csvText(["op_index", "mem_bytes", "cpu_pct"], rows));
}

/** Plausible per-op latencies: keygen ~100–160 µs with rare spikes, eval and
 *  verify in the low milliseconds, total = sum of phases plus 0–2 µs drift. */
export function makeOpsRows(n: number, rng: () => number): number[][] {
  const rows: number[][] = [];
  for (let i = 1; i <= n; i++) {
    const spike = rng() < 0.01 ? Math.floor(rng() * 300) + 250 : 0;
    const keygen = 100 + Math.floor(rng() * 60) + spike;
    const evalUs = 1000 + Math.floor(rng() * 600);
    const verify = 1300 + Math.floor(rng() * 700);
    const drift = Math.floor(rng() * 3);
    rows.push([i, keygen, evalUs, verify, keygen + evalUs + verify + drift]);
  }
  return rows;
}

/** Resource samples every `interval` ops; `sentinelEvery` > 0 turns every
 *  k-th row into a -1/-1 failed-sample row. */
export function makeResRows(
  n: number,
  interval: number,
  rng: () => number,
  sentinelEvery = 0,
): number[][] {
  const rows: number[][] = [];
  let mem = 55_000_000;
  let k = 0;
  for (let op = interval; op <= n; op += interval) {
    k++;
    if (sentinelEvery > 0 && k % sentinelEvery === 0) {
      rows.push([op, -1, -1]);
      continue;
    }
    mem += Math.floor(rng() * 40_000);
    rows.push([op, mem, 17 + Math.floor(rng() * 14)]);
  }
  return rows;
}
