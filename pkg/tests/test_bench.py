from fractions import Fraction

import numpy as np
import pytest

from topocause.bench import (
    BenchRecord,
    BenchTask,
    load_pairs,
    record_csv_row,
    run_benchmark,
    summaries_by_method,
    summarize,
    tasks_from_scenarios,
    wilson_interval,
)
from topocause.data import PairSample
from topocause.errors import EmptyPair, InvalidInput, ParseError
from topocause.rng import generator, mix64, standard_normal
from topocause.scoring import Decision, ScoreConfig, ThresholdConfig, Verdict
from topocause.synth import Scenario, ScenarioKind
from topocause.trac import TracConfig

# Wilson lower bound for 30/30 at 95%, frozen from exact arithmetic
WILSON_LOW_30 = 0.886486606826031225874392055855


def make_record(verdict, truth, method="tra"):
    decision = Decision(verdict=verdict, score=0.1, threshold_or_pvalue=0.05, method=method)
    return BenchRecord(
        task_id="t",
        method=method,
        n=100,
        param=None,
        decision=decision,
        truth=truth,
        checksum="x",
        seconds=0.0,
    )


def test_summarize_counts():
    records = (
        [make_record(Verdict.X_TO_Y, "x->y")] * 6
        + [make_record(Verdict.Y_TO_X, "x->y")] * 2
        + [make_record(Verdict.ABSTAIN, "x->y")] * 2
    )
    s = summarize(records)
    assert (s.n, s.n_decided, s.n_correct, s.n_wrong) == (10, 8, 6, 2)
    assert s.coverage == pytest.approx(0.8)
    assert s.decided_accuracy == pytest.approx(0.75)
    assert s.risk == pytest.approx(0.2)


def test_summarize_all_abstain():
    s = summarize([make_record(Verdict.ABSTAIN, "x->y")] * 5)
    assert s.coverage == 0.0
    assert s.risk == 0.0
    assert s.decided_accuracy is None


def test_summarize_all_correct():
    s = summarize([make_record(Verdict.Y_TO_X, "y->x")] * 4)
    assert (s.coverage, s.decided_accuracy, s.risk) == (1.0, 1.0, 0.0)


def test_summarize_coverage_only_without_direction():
    records = [make_record(Verdict.ABSTAIN, "none")] * 8 + [make_record(Verdict.X_TO_Y, "none")] * 2
    s = summarize(records)
    assert s.coverage == pytest.approx(0.2)
    assert s.decided_accuracy is None and s.risk is None and s.wilson_low is None


def test_summarize_empty_raises():
    with pytest.raises(InvalidInput):
        summarize([])


def test_metric_identities_fuzz():
    rng = generator(1)
    for _ in range(100):
        n = int(rng.integers(1, 40))
        records = []
        for _ in range(n):
            verdict = [Verdict.X_TO_Y, Verdict.Y_TO_X, Verdict.ABSTAIN][int(rng.integers(0, 3))]
            truth = ["x->y", "y->x"][int(rng.integers(0, 2))]
            records.append(make_record(verdict, truth))
        s = summarize(records)
        assert s.risk == s.n_wrong / s.n  # same division, bitwise
        if s.n_decided:
            lhs = (1 - Fraction(s.n_correct, s.n_decided)) * Fraction(s.n_decided, s.n)
            assert lhs == Fraction(s.n_wrong, s.n)
            assert Fraction(s.n_decided, s.n) == Fraction(s.n_wrong, s.n) + Fraction(s.n_correct, s.n)


def test_wilson_boundaries():
    low, high = wilson_interval(0, 20)
    assert low == 0.0
    low, high = wilson_interval(20, 20)
    assert high == 1.0
    low, high = wilson_interval(30, 30, conf=0.95)
    assert low == pytest.approx(WILSON_LOW_30, abs=1e-9)
    assert high == 1.0


def test_wilson_contains_point_estimate():
    rng = generator(2)
    for _ in range(50):
        n = int(rng.integers(1, 200))
        k = int(rng.integers(0, n + 1))
        low, high = wilson_interval(k, n)
        assert low <= k / n <= high
    with pytest.raises(InvalidInput):
        wilson_interval(5, 4)


def write_pair_fixture(tmp_path, n_rows=30):
    rng = generator(3)
    x = standard_normal(rng, n_rows)
    y = x**3 + 0.1 * standard_normal(rng, n_rows)
    lines = [f"{a:.6f} {b:.6f}" for a, b in zip(x, y)]
    lines[5] = "nan 1.0"  # dropped row
    (tmp_path / "pair0001.txt").write_text("\n".join(lines) + "\n")
    # second pair: cause in column 2
    (tmp_path / "pair0002.txt").write_text("\n".join(f"{b:.6f} {a:.6f}" for a, b in zip(x, y)) + "\n")
    meta = "\n".join(
        [
            "0001 1 1 2 2 1.0",
            "0002 2 2 1 1 0.5",
            "0003 1 3 4 4 1.0",  # multivariate cause: excluded
        ]
    )
    meta_path = tmp_path / "pairmeta.txt"
    meta_path.write_text(meta + "\n")
    return meta_path, x, y


def test_load_pairs_filters_and_drops(tmp_path):
    meta, x, y = write_pair_fixture(tmp_path)
    pairs = load_pairs(tmp_path, meta)
    assert len(pairs) == 2  # univariate only
    sample, truth = pairs[0]
    assert truth == "x->y"
    assert sample.n == 29  # NaN row dropped
    assert sample.meta["id"] == "0001"
    # pair 0002 reads its cause from column 2 and its effect from column 1
    s2, _ = pairs[1]
    assert np.allclose(s2.x, np.round(x, 6), atol=1e-9)
    assert np.allclose(s2.y, np.round(y, 6), atol=1e-9)
    assert s2.meta["weight"] == 0.5


def test_load_pairs_missing_files(tmp_path):
    meta = write_pair_fixture(tmp_path)
    with pytest.raises(FileNotFoundError):
        load_pairs(tmp_path, tmp_path / "nope.txt")
    (tmp_path / "pairmeta2.txt").write_text("0009 1 1 2 2 1.0\n")
    with pytest.raises(FileNotFoundError):
        load_pairs(tmp_path, tmp_path / "pairmeta2.txt")


def test_load_pairs_parse_errors(tmp_path):
    meta = tmp_path / "meta.txt"
    meta.write_text("0001 1 1 2 2\n")  # five fields
    with pytest.raises(ParseError) as err:
        load_pairs(tmp_path, meta)
    assert err.value.line_no == 1
    (tmp_path / "pair0004.txt").write_text("1.0 2.0\n1.0 oops\n")
    meta.write_text("0004 1 1 2 2 1.0\n")
    with pytest.raises(ParseError) as err:
        load_pairs(tmp_path, meta)
    assert err.value.line_no == 2


def test_load_pairs_empty_pair(tmp_path):
    (tmp_path / "pair0005.txt").write_text("nan nan\nnan nan\n")
    meta = tmp_path / "meta.txt"
    meta.write_text("0005 1 1 2 2 1.0\n")
    with pytest.raises(EmptyPair):
        load_pairs(tmp_path, meta)


def test_load_pairs_subsample_deterministic(tmp_path):
    rng = generator(4)
    rows = np.column_stack((standard_normal(rng, 200), standard_normal(rng, 200)))
    (tmp_path / "pair0006.txt").write_text("\n".join(f"{a} {b}" for a, b in rows) + "\n")
    meta = tmp_path / "meta.txt"
    meta.write_text("0006 1 1 2 2 1.0\n")
    a = load_pairs(tmp_path, meta, max_samples=50, seed=5)[0][0]
    b = load_pairs(tmp_path, meta, max_samples=50, seed=5)[0][0]
    assert a.n == 50
    assert np.array_equal(a.x, b.x) and np.array_equal(a.y, b.y)
    c = load_pairs(tmp_path, meta, max_samples=50, seed=6)[0][0]
    assert not np.array_equal(a.x, c.x)


def fast_cfgs():
    return (
        ScoreConfig(),
        ThresholdConfig(subsamples=5, seed=0),
        TracConfig(bootstraps=5, seed=0),
    )


def make_tasks(n=60, count=2):
    tasks = []
    for i in range(count):
        rng = generator(mix64(8, i))
        x = standard_normal(rng, n)
        y = x**3 + 0.1 * standard_normal(rng, n)
        tasks.append(BenchTask(id=f"t{i}", sample=PairSample(x, y), truth="x->y", n=n, param=0.1))
    return tasks


def test_run_benchmark_paired_and_deterministic():
    tasks = make_tasks()
    score_cfg, thr, trac = fast_cfgs()
    records = run_benchmark(tasks, ["tra", "trac"], score_cfg, thr, trac, base_seed=3)
    assert len(records) == 4
    # paired evaluation: same checksum across methods within a task
    assert records[0].checksum == records[1].checksum
    assert records[2].checksum == records[3].checksum
    again = run_benchmark(tasks, ["tra", "trac"], score_cfg, thr, trac, base_seed=3)
    rows_a = [record_csv_row(r) for r in records]
    rows_b = [record_csv_row(r) for r in again]
    assert rows_a == rows_b


def test_run_benchmark_thread_invariant():
    tasks = make_tasks()
    score_cfg, thr, trac = fast_cfgs()
    seq = run_benchmark(tasks, ["tra"], score_cfg, thr, trac, base_seed=4, threads=1)
    par = run_benchmark(tasks, ["tra"], score_cfg, thr, trac, base_seed=4, threads=3)
    assert [record_csv_row(r) for r in seq] == [record_csv_row(r) for r in par]


def test_run_benchmark_records_failures_and_continues():
    tasks = make_tasks(n=30)  # too small for tras
    score_cfg, thr, trac = fast_cfgs()
    records = run_benchmark(tasks, ["tras", "tra"], score_cfg, thr, trac, base_seed=5)
    assert len(records) == 4
    tras_records = [r for r in records if r.method == "tras"]
    assert all(r.failure is not None and r.decision is None for r in tras_records)
    assert all(r.failure is None for r in records if r.method == "tra")
    # failed records are excluded from the summary
    assert "tras" not in summaries_by_method(records)
    assert "tra" in summaries_by_method(records)


def test_tasks_from_scenarios_and_coverage_only_summary():
    scenarios = [
        Scenario(ScenarioKind.CONFOUND_LINEAR, n=60, seed=mix64(9, i), params={"gamma": 1.0})
        for i in range(3)
    ]
    tasks = tasks_from_scenarios(scenarios)
    assert all(t.truth == "none" for t in tasks)
    score_cfg, thr, trac = fast_cfgs()
    records = run_benchmark(tasks, ["tra"], score_cfg, thr, trac, base_seed=6)
    summary = summaries_by_method(records)["tra"]
    assert summary.decided_accuracy is None and summary.risk is None
    assert 0.0 <= summary.coverage <= 1.0


def test_record_csv_row_shape():
    record = make_record(Verdict.X_TO_Y, "x->y")
    row = record_csv_row(record)
    fields = row.split(",")
    assert len(fields) == 10
    assert fields[4] == "x->y"
    assert fields[9] == ""  # seconds blank unless timings requested
    assert record_csv_row(record, timings=True).split(",")[9] != ""
