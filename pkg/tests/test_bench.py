"""Benchmark harness: counting, timing, CSV, statistics, comparison."""

import math
import os
import time

import pytest

from qvrf.bench import (
    BYTES_PER_OP,
    OPS_HEADER,
    RES_HEADER,
    BenchConfig,
    BenchRecord,
    BenchSummary,
    MetricStats,
    ResourceSample,
    compare_sources,
    read_ops_csv,
    read_res_csv,
    run_benchmark,
    sample_resources,
    summarize,
    throughput_ab,
    write_csv,
)
from qvrf.errors import (
    BenchAborted,
    EntropyExhausted,
    IncomparableRuns,
    NoData,
    WriteFailed,
)


def entropy_file(tmp_path, n_bytes, name="qrng.bin"):
    path = tmp_path / name
    path.write_bytes(os.urandom(n_bytes))
    return str(path)


def quick_config(**overrides) -> BenchConfig:
    # Small, warmup-free runs keep the unit suite fast; the acceptance
    # suite exercises paper-scale parameters.
    defaults = dict(n_ops=4, source_kind="system-rand", warmup_ops=0, sample_interval=100)
    defaults.update(overrides)
    return BenchConfig(**defaults)


# --- config validation --------------------------------------------------------


def test_config_rejects_bad_values():
    with pytest.raises(ValueError):
        BenchConfig(n_ops=0)
    with pytest.raises(ValueError):
        BenchConfig(n_ops=1, workers=0)
    with pytest.raises(ValueError):
        BenchConfig(n_ops=1, sample_interval=0)
    with pytest.raises(ValueError):
        BenchConfig(n_ops=1, source_kind="dice")
    with pytest.raises(ValueError):
        BenchConfig(n_ops=1, pool_mode="cached")
    with pytest.raises(ValueError):
        BenchConfig(n_ops=1, warmup_ops=-1)


def test_file_source_requires_path():
    with pytest.raises(ValueError):
        run_benchmark(quick_config(source_kind="file-qrng", entropy_path=None))


# --- record counting and timing -------------------------------------------------


def test_single_op_run_has_positive_phases():
    records, samples = run_benchmark(quick_config(n_ops=1))
    assert len(records) == 1
    record = records[0]
    assert record.op_index == 1
    assert record.keygen_us > 0
    assert record.eval_us > 0
    assert record.verify_us > 0
    assert samples == []


def test_record_and_sample_counts(capfd):
    records, samples = run_benchmark(quick_config(n_ops=30, sample_interval=10))
    assert [r.op_index for r in records] == list(range(1, 31))
    assert [s.op_index for s in samples] == [10, 20, 30]
    err = capfd.readouterr().err
    progress = [line for line in err.splitlines() if line.startswith("op=")]
    assert len(progress) == 3
    assert progress[0].startswith("op=10 keygen_us=")
    assert "eval_us=" in progress[0] and "verify_us=" in progress[0]


def test_sample_count_floors(capfd):
    _, samples = run_benchmark(quick_config(n_ops=25, sample_interval=10))
    assert len(samples) == 2


def test_total_additivity_within_3us():
    records, _ = run_benchmark(quick_config(n_ops=20))
    for record in records:
        drift = record.total_us - (record.keygen_us + record.eval_us + record.verify_us)
        assert 0 <= drift <= 3


def test_entropy_budget_exact(tmp_path):
    # Exactly (warmup + n_ops) * 96 bytes: the run must just barely fit.
    path = entropy_file(tmp_path, (3 + 5) * BYTES_PER_OP)
    records, _ = run_benchmark(
        quick_config(n_ops=5, warmup_ops=3, source_kind="file-qrng", entropy_path=path)
    )
    assert len(records) == 5
    # One byte less and the final op must abort.
    short = entropy_file(tmp_path, (3 + 5) * BYTES_PER_OP - 1, name="short.bin")
    with pytest.raises(BenchAborted) as excinfo:
        run_benchmark(
            quick_config(n_ops=5, warmup_ops=3, source_kind="file-qrng", entropy_path=short)
        )
    assert excinfo.value.failed_op_index == 5
    assert len(excinfo.value.records) == 4


def test_abort_at_op_11_with_10_records_flushed(tmp_path):
    path = entropy_file(tmp_path, 10 * BYTES_PER_OP)
    out = str(tmp_path / "partial")
    config = quick_config(
        n_ops=20, warmup_ops=0, source_kind="file-qrng", entropy_path=path, output_path=out
    )
    with pytest.raises(BenchAborted) as excinfo:
        run_benchmark(config)
    abort = excinfo.value
    assert abort.failed_op_index == 11
    assert isinstance(abort.cause, EntropyExhausted)
    assert [r.op_index for r in abort.records] == list(range(1, 11))
    flushed = read_ops_csv(out + ".ops.csv")
    assert flushed == abort.records


def test_warmup_abort_flags_index_zero(tmp_path):
    path = entropy_file(tmp_path, BYTES_PER_OP - 1)
    with pytest.raises(BenchAborted) as excinfo:
        run_benchmark(
            quick_config(n_ops=5, warmup_ops=1, source_kind="file-qrng", entropy_path=path)
        )
    assert excinfo.value.failed_op_index == 0
    assert excinfo.value.records == []


def test_pooled_file_run_matches_budget(tmp_path):
    path = entropy_file(tmp_path, 12 * BYTES_PER_OP)
    records, _ = run_benchmark(
        quick_config(
            n_ops=12,
            source_kind="file-qrng",
            entropy_path=path,
            pool_mode="pooled",
            block_size=256,
        )
    )
    assert len(records) == 12


def test_threaded_run_produces_ordered_records(tmp_path):
    path = entropy_file(tmp_path, 40 * BYTES_PER_OP)
    records, samples = run_benchmark(
        quick_config(
            n_ops=40,
            workers=4,
            source_kind="file-qrng",
            entropy_path=path,
            pool_mode="pooled",
            sample_interval=20,
        )
    )
    assert [r.op_index for r in records] == list(range(1, 41))
    assert len(samples) == 2


def test_threaded_abort_reports_partial(tmp_path):
    path = entropy_file(tmp_path, 10 * BYTES_PER_OP)
    with pytest.raises(BenchAborted) as excinfo:
        run_benchmark(
            quick_config(n_ops=30, workers=4, source_kind="file-qrng", entropy_path=path)
        )
    abort = excinfo.value
    assert 1 <= abort.failed_op_index <= 30
    assert 0 < len(abort.records) <= 10


# --- resource sampling ----------------------------------------------------------


def test_sample_resources_live():
    sample = sample_resources(op_index=7)
    assert sample.op_index == 7
    assert sample.mem_bytes > 1 << 20
    assert 0 <= sample.cpu_pct <= 100 * (os.cpu_count() or 1)


def test_consecutive_samples_memory_stable():
    first = sample_resources()
    second = sample_resources()
    assert abs(second.mem_bytes - first.mem_bytes) <= 0.1 * first.mem_bytes


def test_busy_loop_registers_high_cpu():
    sample_resources()  # reset the interval meter
    deadline = time.perf_counter() + 0.3
    while time.perf_counter() < deadline:
        pass
    assert sample_resources().cpu_pct > 50


def test_sampling_degrades_to_sentinels():
    class Broken:
        def memory_info(self):
            raise OSError("no procfs here")

        def cpu_percent(self, interval):
            raise OSError("no procfs here")

    sample = sample_resources(op_index=3, proc=Broken())
    assert sample == ResourceSample(op_index=3, mem_bytes=-1, cpu_pct=-1)


def test_run_completes_with_broken_introspection(monkeypatch):
    import qvrf.bench as bench_mod

    class Broken:
        def memory_info(self):
            raise OSError("stubbed out")

        def cpu_percent(self, interval):
            raise OSError("stubbed out")

    monkeypatch.setattr(bench_mod, "_process_handle", lambda: Broken())
    records, samples = run_benchmark(quick_config(n_ops=4, sample_interval=2))
    assert len(records) == 4
    assert all(s.mem_bytes == -1 and s.cpu_pct == -1 for s in samples)


# --- CSV --------------------------------------------------------------------


def sample_records(n):
    return [
        BenchRecord(op_index=i, keygen_us=100 + i, eval_us=200 + i, verify_us=300 + i, total_us=600 + 3 * i)
        for i in range(1, n + 1)
    ]


def sample_samples(n, interval=100):
    return [
        ResourceSample(op_index=i * interval, mem_bytes=10_000_000 + i, cpu_pct=50 + i)
        for i in range(1, n + 1)
    ]


def test_write_csv_shapes(tmp_path):
    prefix = str(tmp_path / "run")
    write_csv(sample_records(3), sample_samples(2), prefix)
    ops_lines = (tmp_path / "run.ops.csv").read_text().splitlines()
    res_lines = (tmp_path / "run.res.csv").read_text().splitlines()
    assert ops_lines[0] == ",".join(OPS_HEADER)
    assert res_lines[0] == ",".join(RES_HEADER)
    assert len(ops_lines) == 4
    assert len(res_lines) == 3
    assert ops_lines[1] == "1,101,201,301,603"


def test_write_csv_empty_records(tmp_path):
    prefix = str(tmp_path / "empty")
    write_csv([], [], prefix)
    assert (tmp_path / "empty.ops.csv").read_text().splitlines() == [",".join(OPS_HEADER)]


def test_write_csv_truncates_on_rerun(tmp_path):
    prefix = str(tmp_path / "run")
    write_csv(sample_records(5), [], prefix)
    write_csv(sample_records(2), [], prefix)
    assert len((tmp_path / "run.ops.csv").read_text().splitlines()) == 3


def test_write_csv_failure(tmp_path):
    with pytest.raises(WriteFailed):
        write_csv(sample_records(1), [], str(tmp_path / "no" / "such" / "dir" / "x"))


def test_csv_round_trip(tmp_path):
    prefix = str(tmp_path / "rt")
    records = sample_records(7)
    samples = sample_samples(3)
    write_csv(records, samples, prefix)
    assert read_ops_csv(prefix + ".ops.csv") == records
    assert read_res_csv(prefix + ".res.csv") == samples


def test_read_csv_rejects_wrong_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(ValueError):
        read_ops_csv(str(path))
    with pytest.raises(ValueError):
        read_res_csv(str(path))


def test_live_run_csv_round_trip(tmp_path):
    prefix = str(tmp_path / "live")
    records, samples = run_benchmark(
        quick_config(n_ops=6, sample_interval=3, output_path=prefix)
    )
    assert read_ops_csv(prefix + ".ops.csv") == records
    assert read_res_csv(prefix + ".res.csv") == samples


# --- summarize ----------------------------------------------------------------


def flat_records(values, metric="keygen_us"):
    records = []
    for i, value in enumerate(values, start=1):
        fields = dict(op_index=i, keygen_us=1, eval_us=1, verify_us=1, total_us=3)
        fields[metric] = value
        records.append(BenchRecord(**fields))
    return records


def test_summarize_single_record():
    summary = summarize(flat_records([100]))
    stats = summary.metrics["keygen_us"]
    assert stats.median == 100
    assert stats.p95 == 100
    assert stats.iqr == 0


def test_summarize_nearest_rank_1_to_100():
    summary = summarize(flat_records(list(range(1, 101))))
    stats = summary.metrics["keygen_us"]
    assert stats.median == 50
    assert stats.p95 == 95
    assert stats.p99 == 99
    assert stats.min == 1
    assert stats.max == 100
    assert stats.iqr == 75 - 25


def test_summarize_order_invariant_and_deterministic():
    values = [5, 1, 9, 7, 3]
    assert summarize(flat_records(values)) == summarize(flat_records(sorted(values)))


def test_summarize_empty_raises():
    with pytest.raises(NoData):
        summarize([])


def test_summarize_throughput_from_records():
    records = [
        BenchRecord(op_index=i, keygen_us=100, eval_us=200, verify_us=200, total_us=500)
        for i in range(1, 5)
    ]
    summary = summarize(records)
    assert summary.throughput == pytest.approx(4 / (2000 * 1e-6))
    assert summary.n_ops == 4


def test_summarize_includes_resource_metrics_with_sentinels_dropped():
    records = flat_records([10, 20, 30])
    samples = [
        ResourceSample(op_index=1, mem_bytes=1000, cpu_pct=30),
        ResourceSample(op_index=2, mem_bytes=-1, cpu_pct=-1),
        ResourceSample(op_index=3, mem_bytes=3000, cpu_pct=90),
    ]
    summary = summarize(records, samples)
    assert summary.metrics["mem_bytes"].min == 1000
    assert summary.metrics["mem_bytes"].max == 3000
    assert summary.metrics["cpu_pct"].max == 90


def test_summarize_all_sentinels_omits_metric():
    summary = summarize(flat_records([1]), [ResourceSample(1, -1, -1)])
    assert "mem_bytes" not in summary.metrics
    assert "cpu_pct" not in summary.metrics


# --- compare_sources ------------------------------------------------------------


def synthetic_summary(median, iqr, n_ops=100, kind="file-qrng", mode="unbuffered"):
    stats = MetricStats(min=1, median=median, p95=median * 2, p99=median * 3, max=median * 4, iqr=iqr)
    return BenchSummary(
        n_ops=n_ops,
        throughput=1000.0 / median,
        source_kind=kind,
        pool_mode=mode,
        metrics={name: stats for name in ("keygen_us", "eval_us", "verify_us", "total_us")},
    )


def test_compare_identical_summaries():
    summary = synthetic_summary(100, 10)
    report = compare_sources(summary, summary)
    for comparison in report.metrics.values():
        assert comparison.median_ratio == 1.0
        assert comparison.iqr_ratio == 1.0
        assert comparison.qrng_more_variable is False
    assert report.throughput_ratio == 1.0


def test_compare_iqr_arithmetic():
    report = compare_sources(synthetic_summary(100, 300), synthetic_summary(100, 100))
    comparison = report.metrics["keygen_us"]
    assert comparison.iqr_ratio == pytest.approx(3.0)
    assert comparison.qrng_more_variable is True


def test_compare_zero_iqr_handling():
    report = compare_sources(synthetic_summary(100, 0), synthetic_summary(100, 0))
    assert report.metrics["total_us"].iqr_ratio == 1.0
    report = compare_sources(synthetic_summary(100, 5), synthetic_summary(100, 0))
    assert report.metrics["total_us"].iqr_ratio == math.inf


def test_compare_rejects_mismatched_n_ops():
    with pytest.raises(IncomparableRuns):
        compare_sources(synthetic_summary(1, 1, n_ops=10), synthetic_summary(1, 1, n_ops=20))


def test_compare_report_forms():
    report = compare_sources(synthetic_summary(200, 40), synthetic_summary(100, 20))
    as_dict = report.to_dict()
    assert as_dict["metrics"]["keygen_us"]["median_ratio"] == pytest.approx(2.0)
    text = report.text()
    assert "median_ratio" in text
    assert "keygen_us" in text


def test_compare_live_runs():
    records_a, samples_a = run_benchmark(quick_config(n_ops=5, sample_interval=2))
    records_b, samples_b = run_benchmark(quick_config(n_ops=5, sample_interval=2))
    report = compare_sources(
        summarize(records_a, samples_a, source_kind="file-qrng", pool_mode="unbuffered"),
        summarize(records_b, samples_b, source_kind="system-rand", pool_mode="unbuffered"),
    )
    for name in ("keygen_us", "eval_us", "verify_us", "total_us", "mem_bytes", "cpu_pct"):
        assert name in report.metrics
    assert report.throughput_ratio > 0


# --- throughput A/B -------------------------------------------------------------


def test_throughput_ab_single_worker(tmp_path):
    path = entropy_file(tmp_path, 2 * 10 * BYTES_PER_OP + 4096)
    unbuffered = quick_config(
        n_ops=10, source_kind="file-qrng", entropy_path=path, pool_mode="unbuffered"
    )
    pooled = quick_config(
        n_ops=10, source_kind="file-qrng", entropy_path=path, pool_mode="pooled"
    )
    ratio = throughput_ab(unbuffered, pooled)
    assert ratio > 0


def test_throughput_ab_rejects_mismatches(tmp_path):
    path = entropy_file(tmp_path, 4096)
    a = quick_config(n_ops=10, source_kind="file-qrng", entropy_path=path)
    b = quick_config(n_ops=20, source_kind="file-qrng", entropy_path=path)
    with pytest.raises(IncomparableRuns):
        throughput_ab(a, b)
    c = quick_config(n_ops=10, source_kind="file-qrng", entropy_path=path + ".other")
    with pytest.raises(IncomparableRuns):
        throughput_ab(a, c)
