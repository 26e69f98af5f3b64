"""Latency and resource benchmark for the keygen/prove/verify cycle.

A run executes warmup (excluded from statistics) plus n_ops measured
iterations of {gen_keypair -> vrf_prove -> vrf_verify} on fresh
random messages, timing each phase with the monotonic clock. Every
operation draws 96 bytes from the configured entropy source (32 for
the key seed, 64 for the proof nonce). Resident memory and interval
CPU are sampled every sample_interval completed ops, and one
progress line per interval goes to standard error.

Results are plain dataclasses, written as two CSV files (per-op
latencies and resource samples) whose parse round-trips exactly.
Summaries use nearest-rank percentiles so any reimplementation lands
on identical numbers. A mid-run entropy or verification failure
aborts the run with partial results flushed and attached.
"""

from __future__ import annotations

import csv
import logging
import math
import os
import sys
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import psutil

from .entropy import (
    DEFAULT_BLOCK_SIZE,
    EntropyPool,
    EntropySource,
    FileEntropyReader,
    SystemEntropySource,
    open_file_source,
    pool_wrap,
)
from .errors import (
    BenchAborted,
    CorruptRun,
    EntropyExhausted,
    IncomparableRuns,
    NoData,
    QvrfError,
    WriteFailed,
)
from .vrf import gen_keypair, vrf_prove, vrf_verify

logger = logging.getLogger(__name__)

BYTES_PER_OP = 96  # 32-byte seed + 64-byte proof nonce

OPS_HEADER = ["op_index", "keygen_us", "eval_us", "verify_us", "total_us"]
RES_HEADER = ["op_index", "mem_bytes", "cpu_pct"]

SOURCE_KINDS = ("file-qrng", "system-rand")
POOL_MODES = ("unbuffered", "pooled")

METRIC_NAMES = ("keygen_us", "eval_us", "verify_us", "total_us")
RESOURCE_METRIC_NAMES = ("mem_bytes", "cpu_pct")


@dataclass
class BenchConfig:
    n_ops: int
    source_kind: str = "system-rand"
    entropy_path: str | None = None
    pool_mode: str = "unbuffered"
    block_size: int = DEFAULT_BLOCK_SIZE
    workers: int = 1
    sample_interval: int = 100
    message_bytes: int = 32
    output_path: str | None = None
    warmup_ops: int = 100

    def __post_init__(self):
        if self.n_ops < 1:
            raise ValueError(f"n_ops must be at least 1, got {self.n_ops}")
        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")
        if self.sample_interval < 1:
            raise ValueError(f"sample_interval must be at least 1, got {self.sample_interval}")
        if self.warmup_ops < 0:
            raise ValueError(f"warmup_ops must be non-negative, got {self.warmup_ops}")
        if self.message_bytes < 0:
            raise ValueError(f"message_bytes must be non-negative, got {self.message_bytes}")
        if self.source_kind not in SOURCE_KINDS:
            raise ValueError(f"source_kind must be one of {SOURCE_KINDS}, got {self.source_kind!r}")
        if self.pool_mode not in POOL_MODES:
            raise ValueError(f"pool_mode must be one of {POOL_MODES}, got {self.pool_mode!r}")


@dataclass(frozen=True)
class BenchRecord:
    op_index: int
    keygen_us: int
    eval_us: int
    verify_us: int
    total_us: int


@dataclass(frozen=True)
class ResourceSample:
    op_index: int
    mem_bytes: int
    cpu_pct: int


@dataclass(frozen=True)
class MetricStats:
    min: int
    median: int
    p95: int
    p99: int
    max: int
    iqr: int

    def to_dict(self) -> dict:
        return {
            "min": self.min,
            "median": self.median,
            "p95": self.p95,
            "p99": self.p99,
            "max": self.max,
            "iqr": self.iqr,
        }


@dataclass(frozen=True)
class BenchSummary:
    n_ops: int
    throughput: float
    source_kind: str
    pool_mode: str
    metrics: dict[str, MetricStats]

    def to_dict(self) -> dict:
        return {
            "n_ops": self.n_ops,
            "throughput_ops_per_s": self.throughput,
            "source_kind": self.source_kind,
            "pool_mode": self.pool_mode,
            "metrics": {name: stats.to_dict() for name, stats in self.metrics.items()},
        }

    def text(self) -> str:
        lines = [
            f"source={self.source_kind} pool={self.pool_mode} "
            f"n_ops={self.n_ops} throughput={self.throughput:.2f} ops/s",
            f"{'metric':<12} {'min':>10} {'median':>10} {'p95':>10} "
            f"{'p99':>10} {'max':>10} {'iqr':>10}",
        ]
        for name, stats in self.metrics.items():
            lines.append(
                f"{name:<12} {stats.min:>10} {stats.median:>10} {stats.p95:>10} "
                f"{stats.p99:>10} {stats.max:>10} {stats.iqr:>10}"
            )
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Resource sampling
# ---------------------------------------------------------------------------

_PROC = None
_SAMPLE_WARNED = False


def _process_handle():
    global _PROC
    if _PROC is None:
        _PROC = psutil.Process()
        # Prime the CPU meter so later calls report interval utilization.
        _PROC.cpu_percent(None)
    return _PROC


def sample_resources(op_index: int = 0, proc=None) -> ResourceSample:
    """Resident memory and since-last-call CPU, or -1 sentinels.

    Introspection failures degrade to sentinel values with a single
    logged warning; the benchmark itself keeps running.
    """
    global _SAMPLE_WARNED
    handle = proc if proc is not None else _process_handle()
    try:
        mem_bytes = int(handle.memory_info().rss)
        cpu = handle.cpu_percent(None)
    except Exception as exc:
        if not _SAMPLE_WARNED:
            logger.warning("resource sampling unavailable (%s); recording -1", exc)
            _SAMPLE_WARNED = True
        return ResourceSample(op_index=op_index, mem_bytes=-1, cpu_pct=-1)
    ceiling = 100 * (os.cpu_count() or 1)
    cpu_pct = max(0, min(round(cpu), ceiling))
    return ResourceSample(op_index=op_index, mem_bytes=mem_bytes, cpu_pct=cpu_pct)


# ---------------------------------------------------------------------------
# The run itself
# ---------------------------------------------------------------------------


def _build_source(config: BenchConfig) -> EntropySource:
    if config.source_kind == "file-qrng":
        if not config.entropy_path:
            raise ValueError("file-qrng runs need entropy_path")
        inner: EntropySource = open_file_source(config.entropy_path)
    else:
        inner = SystemEntropySource()
    if config.pool_mode == "pooled":
        # Background refill keeps supplier latency off the op path.
        return pool_wrap(inner, block_size=config.block_size, prefetch=True)
    return inner


def _run_one_op(source: EntropySource, message_bytes: int, op_index: int) -> BenchRecord:
    message = os.urandom(message_bytes)
    t0 = time.perf_counter_ns()
    sk, pk = gen_keypair(source)
    t1 = time.perf_counter_ns()
    output, proof = vrf_prove(sk, message, source)
    t2 = time.perf_counter_ns()
    ok = vrf_verify(pk, message, output, proof)
    t3 = time.perf_counter_ns()
    if not ok:
        raise CorruptRun(f"op {op_index}: freshly produced proof failed verification")
    return BenchRecord(
        op_index=op_index,
        keygen_us=(t1 - t0) // 1000,
        eval_us=(t2 - t1) // 1000,
        verify_us=(t3 - t2) // 1000,
        total_us=(t3 - t0) // 1000,
    )


def _progress(record: BenchRecord) -> None:
    print(
        f"op={record.op_index} keygen_us={record.keygen_us} "
        f"eval_us={record.eval_us} verify_us={record.verify_us}",
        file=sys.stderr,
    )


def _flush_partial(config: BenchConfig, records, samples) -> None:
    if config.output_path is None:
        return
    try:
        write_csv(records, samples, config.output_path)
    except WriteFailed as exc:
        logger.warning("could not flush partial results: %s", exc)


def run_benchmark(config: BenchConfig) -> tuple[list[BenchRecord], list[ResourceSample]]:
    """Execute one full run; returns (records, samples) and writes CSVs.

    Aborts raise BenchAborted carrying everything completed so far;
    partial results are flushed to output_path first when one is set.
    """
    source = _build_source(config)
    try:
        return _run_with_source(config, source)
    finally:
        if isinstance(source, EntropyPool):
            source.close()


def _run_with_source(config, source):
    sample_resources()  # prime the CPU meter before timing starts

    for i in range(config.warmup_ops):
        try:
            _run_one_op(source, config.message_bytes, -(i + 1))
        except (EntropyExhausted, CorruptRun) as exc:
            # Index 0 marks a failure before measurement began.
            _flush_partial(config, [], [])
            raise BenchAborted(0, [], [], exc) from exc

    if config.workers == 1:
        records, samples = _run_serial(config, source)
    else:
        records, samples = _run_threaded(config, source)

    if config.output_path is not None:
        write_csv(records, samples, config.output_path)
    return records, samples


def _run_serial(config, source):
    records: list[BenchRecord] = []
    samples: list[ResourceSample] = []
    for op_index in range(1, config.n_ops + 1):
        try:
            record = _run_one_op(source, config.message_bytes, op_index)
        except (EntropyExhausted, CorruptRun) as exc:
            _flush_partial(config, records, samples)
            raise BenchAborted(op_index, records, samples, exc) from exc
        records.append(record)
        if op_index % config.sample_interval == 0:
            samples.append(sample_resources(op_index))
            _progress(record)
    return records, samples


def _run_threaded(config, source):
    """Workers share the source; the coordinator samples at boundaries."""
    records: dict[int, BenchRecord] = {}
    samples: list[ResourceSample] = []
    next_index = iter(range(1, config.n_ops + 1))
    completed = 0
    last_record: BenchRecord | None = None
    first_failure: tuple[int, Exception] | None = None
    cond = threading.Condition()

    def worker():
        nonlocal completed, last_record, first_failure
        while True:
            with cond:
                if first_failure is not None:
                    return
                op_index = next(next_index, None)
            if op_index is None:
                return
            try:
                record = _run_one_op(source, config.message_bytes, op_index)
            except (EntropyExhausted, CorruptRun) as exc:
                with cond:
                    if first_failure is None or op_index < first_failure[0]:
                        first_failure = (op_index, exc)
                    cond.notify_all()
                return
            with cond:
                records[op_index] = record
                completed += 1
                last_record = record
                cond.notify_all()

    with ThreadPoolExecutor(max_workers=config.workers) as executor:
        futures = [executor.submit(worker) for _ in range(config.workers)]
        boundaries = config.n_ops // config.sample_interval
        for k in range(1, boundaries + 1):
            boundary = k * config.sample_interval
            with cond:
                cond.wait_for(lambda: completed >= boundary or first_failure is not None)
                if first_failure is not None and completed < boundary:
                    break
                record = last_record
            samples.append(sample_resources(boundary))
            if record is not None:
                _progress(record)
        for future in futures:
            future.result()

    ordered = [records[i] for i in sorted(records)]
    if first_failure is not None:
        index, exc = first_failure
        _flush_partial(config, ordered, samples)
        raise BenchAborted(index, ordered, samples, exc) from exc
    return ordered, samples


# ---------------------------------------------------------------------------
# CSV emission and parsing
# ---------------------------------------------------------------------------


def write_csv(records, samples, path_prefix: str) -> None:
    """Write `<prefix>.ops.csv` and `<prefix>.res.csv`, truncating."""
    try:
        with open(f"{path_prefix}.ops.csv", "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(OPS_HEADER)
            for r in records:
                writer.writerow([r.op_index, r.keygen_us, r.eval_us, r.verify_us, r.total_us])
        with open(f"{path_prefix}.res.csv", "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(RES_HEADER)
            for s in samples:
                writer.writerow([s.op_index, s.mem_bytes, s.cpu_pct])
    except OSError as exc:
        raise WriteFailed(f"cannot write CSV under {path_prefix!r}: {exc}") from exc


def read_ops_csv(path: str) -> list[BenchRecord]:
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    if not rows or rows[0] != OPS_HEADER:
        raise ValueError(f"{path}: expected header {','.join(OPS_HEADER)}")
    return [BenchRecord(*(int(cell) for cell in row)) for row in rows[1:]]


def read_res_csv(path: str) -> list[ResourceSample]:
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    if not rows or rows[0] != RES_HEADER:
        raise ValueError(f"{path}: expected header {','.join(RES_HEADER)}")
    return [ResourceSample(*(int(cell) for cell in row)) for row in rows[1:]]


# ---------------------------------------------------------------------------
# Statistics
# ---------------------------------------------------------------------------


def _nearest_rank(sorted_values: list[int], pct: float) -> int:
    rank = max(1, math.ceil(pct / 100 * len(sorted_values)))
    return sorted_values[rank - 1]


def _stats(values: list[int]) -> MetricStats:
    ordered = sorted(values)
    return MetricStats(
        min=ordered[0],
        median=_nearest_rank(ordered, 50),
        p95=_nearest_rank(ordered, 95),
        p99=_nearest_rank(ordered, 99),
        max=ordered[-1],
        iqr=_nearest_rank(ordered, 75) - _nearest_rank(ordered, 25),
    )


def summarize(
    records,
    samples=None,
    source_kind: str = "unknown",
    pool_mode: str = "unknown",
) -> BenchSummary:
    """Order statistics over a completed run.

    Latency metrics always; mem_bytes and cpu_pct too when samples
    are given (sentinel -1 entries are dropped first). Throughput is
    derived purely from the records so a summary recomputed from CSV
    matches the live one exactly.
    """
    records = list(records)
    if not records:
        raise NoData("cannot summarize an empty record set")
    metrics = {
        name: _stats([getattr(r, name) for r in records]) for name in METRIC_NAMES
    }
    if samples:
        for name in RESOURCE_METRIC_NAMES:
            values = [getattr(s, name) for s in samples if getattr(s, name) >= 0]
            if values:
                metrics[name] = _stats(values)
    total_us = sum(r.total_us for r in records)
    throughput = len(records) / (total_us * 1e-6) if total_us > 0 else float("inf")
    return BenchSummary(
        n_ops=len(records),
        throughput=throughput,
        source_kind=source_kind,
        pool_mode=pool_mode,
        metrics=metrics,
    )


# ---------------------------------------------------------------------------
# Comparison
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MetricComparison:
    median_ratio: float
    iqr_ratio: float
    qrng_more_variable: bool

    def to_dict(self) -> dict:
        return {
            "median_ratio": self.median_ratio,
            "iqr_ratio": self.iqr_ratio,
            "qrng_more_variable": self.qrng_more_variable,
        }


@dataclass(frozen=True)
class ComparisonReport:
    n_ops: int
    qrng_label: str
    rand_label: str
    throughput_ratio: float
    metrics: dict[str, MetricComparison]

    def to_dict(self) -> dict:
        return {
            "n_ops": self.n_ops,
            "qrng_label": self.qrng_label,
            "rand_label": self.rand_label,
            "throughput_ratio": self.throughput_ratio,
            "metrics": {name: cmp.to_dict() for name, cmp in self.metrics.items()},
        }

    def text(self) -> str:
        lines = [
            f"comparison over {self.n_ops} ops: {self.qrng_label} vs {self.rand_label}",
            f"throughput ratio (qrng/rand): {self.throughput_ratio:.4f}",
            f"{'metric':<12} {'median_ratio':>12} {'iqr_ratio':>12} {'qrng_more_variable':>20}",
        ]
        for name, cmp in self.metrics.items():
            lines.append(
                f"{name:<12} {cmp.median_ratio:>12.4f} {cmp.iqr_ratio:>12.4f} "
                f"{str(cmp.qrng_more_variable).lower():>20}"
            )
        return "\n".join(lines)


def _ratio(numerator: float, denominator: float) -> float:
    if denominator == 0:
        return 1.0 if numerator == 0 else float("inf")
    return numerator / denominator


def compare_sources(summary_qrng: BenchSummary, summary_rand: BenchSummary) -> ComparisonReport:
    """Per-metric median and IQR ratios, qrng relative to rand."""
    if summary_qrng.n_ops != summary_rand.n_ops:
        raise IncomparableRuns(
            f"n_ops differ: {summary_qrng.n_ops} vs {summary_rand.n_ops}"
        )
    metrics: dict[str, MetricComparison] = {}
    for name in (*METRIC_NAMES, *RESOURCE_METRIC_NAMES):
        a = summary_qrng.metrics.get(name)
        b = summary_rand.metrics.get(name)
        if a is None or b is None:
            continue
        metrics[name] = MetricComparison(
            median_ratio=_ratio(a.median, b.median),
            iqr_ratio=_ratio(a.iqr, b.iqr),
            qrng_more_variable=a.iqr > b.iqr,
        )
    return ComparisonReport(
        n_ops=summary_qrng.n_ops,
        qrng_label=f"{summary_qrng.source_kind}/{summary_qrng.pool_mode}",
        rand_label=f"{summary_rand.source_kind}/{summary_rand.pool_mode}",
        throughput_ratio=_ratio(summary_qrng.throughput, summary_rand.throughput),
        metrics=metrics,
    )


def throughput_ab(config_unbuffered: BenchConfig, config_pooled: BenchConfig) -> float:
    """Pooled-over-unbuffered throughput ratio from two complete runs."""
    if config_unbuffered.n_ops != config_pooled.n_ops:
        raise IncomparableRuns("A/B runs must use identical n_ops")
    if config_unbuffered.entropy_path != config_pooled.entropy_path:
        raise IncomparableRuns("A/B runs must read the same entropy file")
    records_u, _ = run_benchmark(config_unbuffered)
    records_p, _ = run_benchmark(config_pooled)
    unbuffered = summarize(records_u).throughput
    pooled = summarize(records_p).throughput
    return pooled / unbuffered
