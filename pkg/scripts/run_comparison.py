#!/usr/bin/env python3
"""Desk-scale qrng-vs-rand comparison.

Runs the benchmark once against a file entropy source (unbuffered,
the measured configuration) and once against the OS source, writes
both CSV pairs plus the comparison report into --outdir, and prints
the report. Without --entropy, a stand-in file is synthesized from
OS randomness; point --entropy at a real QRNG capture (for example
one produced by `qvrf entropy-fetch`) to measure the real thing.
"""

import argparse
import json
import os
import sys

from qvrf.bench import BYTES_PER_OP, BenchConfig, compare_sources, run_benchmark, summarize


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.strip().splitlines()[0])
    parser.add_argument("--n-ops", type=int, default=10_000)
    parser.add_argument("--warmup", type=int, default=100)
    parser.add_argument("--outdir", default="results")
    parser.add_argument("--entropy", help="existing entropy file (synthesized when omitted)")
    args = parser.parse_args()

    os.makedirs(args.outdir, exist_ok=True)
    entropy_path = args.entropy
    if entropy_path is None:
        entropy_path = os.path.join(args.outdir, "qrng-input.bin")
        needed = (args.n_ops + args.warmup) * BYTES_PER_OP
        with open(entropy_path, "wb") as handle:
            handle.write(os.urandom(needed))
        print(f"synthesized {needed} entropy bytes at {entropy_path}", file=sys.stderr)

    qrng_config = BenchConfig(
        n_ops=args.n_ops,
        source_kind="file-qrng",
        entropy_path=entropy_path,
        warmup_ops=args.warmup,
        output_path=os.path.join(args.outdir, "qrng"),
    )
    rand_config = BenchConfig(
        n_ops=args.n_ops,
        source_kind="system-rand",
        warmup_ops=args.warmup,
        output_path=os.path.join(args.outdir, "rand"),
    )

    print("running file-qrng benchmark...", file=sys.stderr)
    records_q, samples_q = run_benchmark(qrng_config)
    print("running system-rand benchmark...", file=sys.stderr)
    records_r, samples_r = run_benchmark(rand_config)

    summary_q = summarize(records_q, samples_q, source_kind="file-qrng", pool_mode="unbuffered")
    summary_r = summarize(records_r, samples_r, source_kind="system-rand", pool_mode="unbuffered")
    report = compare_sources(summary_q, summary_r)

    print(summary_q.text())
    print()
    print(summary_r.text())
    print()
    print(report.text())

    with open(os.path.join(args.outdir, "comparison.json"), "w") as handle:
        json.dump(report.to_dict(), handle, indent=2)
    with open(os.path.join(args.outdir, "comparison.txt"), "w") as handle:
        handle.write(report.text() + "\n")
    print(f"\nCSV pairs and reports written under {args.outdir}/", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
