#!/usr/bin/env python3
"""Pooled-vs-unbuffered throughput A/B over the same entropy file.

Runs the threaded benchmark twice against one file source — once with
per-call reads (unbuffered) and once behind the caching pool — then
prints both summaries and the pooled/unbuffered throughput ratio.
Without --entropy, a stand-in file is synthesized from OS randomness.
"""

import argparse
import os
import sys

from qvrf.bench import BYTES_PER_OP, BenchConfig, run_benchmark, summarize


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.strip().splitlines()[0])
    parser.add_argument("--n-ops", type=int, default=5_000)
    parser.add_argument("--workers", type=int, default=8)
    parser.add_argument("--warmup", type=int, default=50)
    parser.add_argument("--block-size", type=int, default=4096)
    parser.add_argument("--outdir", default="results")
    parser.add_argument("--entropy", help="existing entropy file (synthesized when omitted)")
    args = parser.parse_args()

    os.makedirs(args.outdir, exist_ok=True)
    entropy_path = args.entropy
    if entropy_path is None:
        entropy_path = os.path.join(args.outdir, "ab-input.bin")
        needed = 2 * (args.n_ops + args.warmup) * BYTES_PER_OP
        with open(entropy_path, "wb") as handle:
            handle.write(os.urandom(needed))
        print(f"synthesized {needed} entropy bytes at {entropy_path}", file=sys.stderr)

    common = dict(
        n_ops=args.n_ops,
        source_kind="file-qrng",
        entropy_path=entropy_path,
        block_size=args.block_size,
        workers=args.workers,
        warmup_ops=args.warmup,
    )
    unbuffered_config = BenchConfig(
        pool_mode="unbuffered",
        output_path=os.path.join(args.outdir, "ab-unbuffered"),
        **common,
    )
    pooled_config = BenchConfig(
        pool_mode="pooled",
        output_path=os.path.join(args.outdir, "ab-pooled"),
        **common,
    )

    print("running unbuffered leg...", file=sys.stderr)
    records_u, samples_u = run_benchmark(unbuffered_config)
    print("running pooled leg...", file=sys.stderr)
    records_p, samples_p = run_benchmark(pooled_config)

    summary_u = summarize(records_u, samples_u, source_kind="file-qrng", pool_mode="unbuffered")
    summary_p = summarize(records_p, samples_p, source_kind="file-qrng", pool_mode="pooled")
    ratio = summary_p.throughput / summary_u.throughput

    print(summary_u.text())
    print()
    print(summary_p.text())
    print()
    print(f"pooled / unbuffered throughput ratio: {ratio:.3f}")
    print(f"CSV pairs written under {args.outdir}/", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
