/** End-to-end criterion: from two desk-scale CSV pairs, renderAll emits
 *  exactly six nonempty image files and reports row counts equal to the
 *  row counts of the CSVs themselves. */

import { readFileSync, statSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { renderAll } from "../src/figures.js";
import { makeOpsRows, makeResRows, mulberry32, tempDir, writeOpsCsv, writeResCsv } from "./helpers.js";

/** Row count straight from the file text, independent of the loader. */
function csvRows(path: string): number {
  return readFileSync(path, "utf8").split(/\r?\n/).filter((l) => l.length > 0).length - 1;
}

describe("plot tool acceptance", () => {
  it("emits exactly 6 nonempty figures with row counts equal to the CSVs", () => {
    const dir = tempDir();
    const nOps = 10_000;
    const interval = 100;

    const qOps = join(dir, "qrng.ops.csv");
    const rOps = join(dir, "rand.ops.csv");
    const qRes = join(dir, "qrng.res.csv");
    const rRes = join(dir, "rand.res.csv");
    writeOpsCsv(qOps, makeOpsRows(nOps, mulberry32(101)));
    writeOpsCsv(rOps, makeOpsRows(nOps, mulberry32(102)));
    writeResCsv(qRes, makeResRows(nOps, interval, mulberry32(103)));
    writeResCsv(rRes, makeResRows(nOps, interval, mulberry32(104)));

    const outdir = join(dir, "figs");
    const report = renderAll(
      [
        { label: "qrng", path: qOps },
        { label: "rand", path: rOps },
      ],
      [
        { label: "qrng", path: qRes },
        { label: "rand", path: rRes },
      ],
      outdir,
    );

    expect(report.files).toHaveLength(6);
    const sizes = report.files.map((f) => statSync(f).size);
    expect(sizes.every((s) => s > 0)).toBe(true);

    const expectedOps = { qrng: csvRows(qOps), rand: csvRows(rOps) };
    const expectedRes = { qrng: csvRows(qRes), rand: csvRows(rRes) };
    expect(expectedOps).toEqual({ qrng: nOps, rand: nOps });
    expect(expectedRes).toEqual({ qrng: nOps / interval, rand: nOps / interval });

    for (const metric of ["keygen_us", "eval_us", "verify_us", "total_us"]) {
      expect(report.rowCounts[join(outdir, `${metric}.svg`)]).toEqual(expectedOps);
    }
    for (const metric of ["mem_bytes", "cpu_pct"]) {
      expect(report.rowCounts[join(outdir, `${metric}.svg`)]).toEqual(expectedRes);
    }

    /* the reported counts also appear verbatim in each figure's footer */
    for (const file of report.files) {
      const svg = readFileSync(file, "utf8");
      const counts = report.rowCounts[file]!;
      expect(svg).toContain(`rows: qrng=${counts["qrng"]}, rand=${counts["rand"]}`);
    }

    console.log(
      `PASS [plot-tool] 6/6 nonempty figures (${sizes.join(", ")} bytes); ` +
        `row counts ops=${expectedOps.qrng}/${expectedOps.rand} res=${expectedRes.qrng}/${expectedRes.rand} match the CSVs`,
    );
  });
});
