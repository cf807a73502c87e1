"""Benchmark harness: metrics, pair-file ingestion, paired method evaluation.

Every method sees the identical dataset draw per task, records are emitted
in a fixed task-major order independent of scheduling, and failures are
recorded rather than fatal.  Metric ratios are defined by integer counts so
the count identities (risk * n = n_wrong, risk = (1 - acc) * coverage) hold
exactly in rational arithmetic.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy.special import ndtri

from .data import PairSample
from .errors import EmptyPair, InvalidInput, ParseError
from .rng import generator, mix64
from .scoring import (
    Decision,
    ScoreConfig,
    ThresholdConfig,
    VARIANT_TRA,
    VARIANT_TRAS,
    Verdict,
    decide,
    stability_threshold,
    tra_score,
    tras_score,
)
from .synth import generate
from .trac import METHOD_TRAC, TracConfig, trac_pvalue

TRUTH_DIRECTIONAL = ("x->y", "y->x")

RECORD_CSV_HEADER = "scenario,method,n,param,decision,truth,score,pvalue,tau,seconds"
SUMMARY_CSV_HEADER = (
    "method,records,decided,correct,wrong,coverage,decided_accuracy,risk,wilson_low,wilson_high"
)


@dataclass(frozen=True)
class BenchTask:
    id: str
    sample: PairSample
    truth: str
    n: int
    param: float | None = None
    info: dict = field(default_factory=dict)  # flat provenance, echoed in result logs


@dataclass(frozen=True)
class BenchRecord:
    task_id: str
    method: str
    n: int
    param: float | None
    decision: Decision | None
    truth: str
    checksum: str
    seconds: float
    extras: dict = field(default_factory=dict)
    failure: str | None = None

    @property
    def decided(self) -> bool:
        return self.decision is not None and self.decision.verdict != Verdict.ABSTAIN


@dataclass(frozen=True)
class MetricsSummary:
    n: int
    n_decided: int
    n_correct: int
    n_wrong: int
    coverage: float
    decided_accuracy: float | None
    risk: float | None
    wilson_low: float | None
    wilson_high: float | None


def wilson_interval(k: int, n: int, conf: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion k/n."""
    if n < 1 or not (0 <= k <= n):
        raise InvalidInput("need 0 <= k <= n with n >= 1")
    z = float(ndtri((1.0 + conf) / 2.0))
    phat = k / n
    denom = 1.0 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    radius = z * np.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    low = 0.0 if k == 0 else max(0.0, center - radius)
    high = 1.0 if k == n else min(1.0, center + radius)
    return low, high


def summarize(records, conf: float = 0.95) -> MetricsSummary:
    """Coverage / decided accuracy / directed risk over successful records.

    When any record lacks a directional ground truth the summary is
    coverage-only: accuracy, risk and the Wilson interval are None.
    """
    recs = [r for r in records if r.failure is None and r.decision is not None]
    if not recs:
        raise InvalidInput("no successful records to summarize")
    n = len(recs)
    n_decided = sum(1 for r in recs if r.decided)
    coverage = n_decided / n
    directional = all(r.truth in TRUTH_DIRECTIONAL for r in recs)
    if not directional:
        return MetricsSummary(n, n_decided, 0, 0, coverage, None, None, None, None)
    n_correct = sum(1 for r in recs if r.decided and r.decision.verdict.value == r.truth)
    n_wrong = n_decided - n_correct
    risk = n_wrong / n
    if n_decided == 0:
        return MetricsSummary(n, 0, 0, 0, coverage, None, risk, None, None)
    acc = n_correct / n_decided
    low, high = wilson_interval(n_correct, n_decided, conf)
    return MetricsSummary(n, n_decided, n_correct, n_wrong, coverage, acc, risk, low, high)


def _resolve_pair_file(directory: Path, pair_id: str) -> Path:
    for name in (f"{pair_id}.txt", f"pair{pair_id}.txt", pair_id):
        candidate = directory / name
        if candidate.is_file():
            return candidate
    raise FileNotFoundError(f"no data file for pair {pair_id!r} in {directory}")


def _read_matrix(path: Path) -> np.ndarray:
    rows = []
    ncol = None
    with open(path) as fh:
        for line_no, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            tokens = line.split()
            if ncol is None:
                ncol = len(tokens)
            elif len(tokens) != ncol:
                raise ParseError(path, line_no, f"expected {ncol} columns, got {len(tokens)}")
            try:
                rows.append([float(t) for t in tokens])
            except ValueError:
                raise ParseError(path, line_no, "non-numeric value") from None
    if not rows:
        raise EmptyPair(f"{path} has no data rows")
    return np.asarray(rows, dtype=np.float64)


def load_pairs(dir_path, meta_path, max_samples: int = 2000, seed: int = 0):
    """Load univariate cause-effect pairs described by a metadata file.

    Metadata rows are `id cause_first cause_last effect_first effect_last
    weight`; only pairs whose cause and effect are single columns are kept.
    Non-finite rows are dropped, and pairs longer than max_samples are
    subsampled once without replacement (seeded per pair) so every method
    sees the same draw.  Returns a list of (PairSample, truth) tuples.
    """
    directory = Path(dir_path)
    meta = Path(meta_path)
    if not meta.is_file():
        raise FileNotFoundError(f"metadata file not found: {meta}")
    selected = []
    with open(meta) as fh:
        for line_no, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) < 6:
                raise ParseError(meta, line_no, f"expected 6 fields, got {len(tokens)}")
            pair_id = tokens[0]
            try:
                c0, c1, e0, e1 = (int(float(t)) for t in tokens[1:5])
                weight = float(tokens[5])
            except ValueError:
                raise ParseError(meta, line_no, "non-numeric column index or weight") from None
            if c0 != c1 or e0 != e1:
                continue  # univariate cause and effect only
            selected.append((pair_id, c0, e0, weight))

    out = []
    for index, (pair_id, cause_col, effect_col, weight) in enumerate(selected):
        data = _read_matrix(_resolve_pair_file(directory, pair_id))
        needed = max(cause_col, effect_col)
        if data.shape[1] < needed:
            raise ParseError(directory / pair_id, 1, f"metadata references column {needed}, file has {data.shape[1]}")
        x = data[:, cause_col - 1]
        y = data[:, effect_col - 1]
        keep = np.isfinite(x) & np.isfinite(y)
        x, y = x[keep], y[keep]
        if x.size == 0:
            raise EmptyPair(f"pair {pair_id} has no finite rows")
        if x.size > max_samples:
            rows = generator(mix64(seed, index)).choice(x.size, size=max_samples, replace=False)
            rows.sort()
            x, y = x[rows], y[rows]
        sample = PairSample(x, y, {"id": pair_id, "weight": weight, "source": "pairs"})
        out.append((sample, "x->y"))
    return out


def tasks_from_scenarios(scenarios) -> list[BenchTask]:
    tasks = []
    for i, sc in enumerate(scenarios):
        sample = generate(sc)
        task_id = f"{sc.kind.value}_{i:05d}_n{sc.n}_p{sc.sweep_value:g}"
        info = {k: v for k, v in sc.to_record().items() if k not in ("n", "truth")}
        tasks.append(
            BenchTask(id=task_id, sample=sample, truth=sc.truth, n=sc.n, param=sc.sweep_value, info=info)
        )
    return tasks


def tasks_from_pairs(pairs) -> list[BenchTask]:
    return [
        BenchTask(
            id=str(sample.meta.get("id", i)),
            sample=sample,
            truth=truth,
            n=sample.n,
            info={"weight": sample.meta.get("weight", 1.0)},
        )
        for i, (sample, truth) in enumerate(pairs)
    ]


def run_method(
    sample: PairSample,
    method: str,
    seed: int,
    score_cfg: ScoreConfig = ScoreConfig(),
    threshold_cfg: ThresholdConfig = ThresholdConfig(),
    trac_cfg: TracConfig = TracConfig(),
    threads: int = 1,
) -> tuple[Decision, dict]:
    """Run one method on one sample; returns its Decision plus diagnostics."""
    if method in (VARIANT_TRA, VARIANT_TRAS):
        base = tra_score if method == VARIANT_TRA else tras_score

        def scorer(s, sd):
            return base(s, sd, score_cfg)

        tau = stability_threshold(sample, scorer, replace(threshold_cfg, seed=seed))
        result = scorer(sample, seed)
        decision = decide(result.score, tau, method=method)
        return decision, {"tau": tau}
    if method == METHOD_TRAC:
        res = trac_pvalue(sample, replace(trac_cfg, seed=seed), score_cfg, threads=threads)
        return res.verdict, {"pvalue": res.p_value, "rho": res.rho_hat}
    raise InvalidInput(f"unknown method {method!r}")


def run_benchmark(
    tasks,
    methods,
    score_cfg: ScoreConfig = ScoreConfig(),
    threshold_cfg: ThresholdConfig = ThresholdConfig(),
    trac_cfg: TracConfig = TracConfig(),
    base_seed: int = 0,
    threads: int = 1,
    sink=None,
) -> list[BenchRecord]:
    """Evaluate every method on every task (paired: identical draws).

    The evaluation seed of task i is mix64(base_seed, i) for all methods.
    Records are produced in task-major order regardless of thread
    scheduling; per-record failures are flagged and the run continues.
    ``sink`` (if given) receives each record in order as it is finalized.
    """
    tasks = list(tasks)
    methods = list(methods)
    jobs = [(ti, mi) for ti in range(len(tasks)) for mi in range(len(methods))]

    def run_one(job):
        ti, mi = job
        task = tasks[ti]
        seed = mix64(base_seed, ti)
        start = time.perf_counter()
        try:
            decision, extras = run_method(
                task.sample, methods[mi], seed, score_cfg, threshold_cfg, trac_cfg, threads=1
            )
            failure = None
        except Exception as exc:
            decision, extras, failure = None, {}, f"{type(exc).__name__}: {exc}"
        elapsed = time.perf_counter() - start
        return BenchRecord(
            task_id=task.id,
            method=methods[mi],
            n=task.n,
            param=task.param,
            decision=decision,
            truth=task.truth,
            checksum=task.sample.checksum(),
            seconds=elapsed,
            extras={**task.info, **extras},
            failure=failure,
        )

    records: list[BenchRecord] = []
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            iterator = pool.map(run_one, jobs)
            for record in iterator:
                records.append(record)
                if sink is not None:
                    sink(record)
    else:
        for job in jobs:
            record = run_one(job)
            records.append(record)
            if sink is not None:
                sink(record)
    return records


def summaries_by_method(records, conf: float = 0.95) -> dict[str, MetricsSummary]:
    out: dict[str, MetricsSummary] = {}
    for method in dict.fromkeys(r.method for r in records):
        group = [r for r in records if r.method == method and r.failure is None]
        if group:
            out[method] = summarize(group, conf)
    return out


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".10g")
    return str(value)


def record_csv_row(record: BenchRecord, timings: bool = False) -> str:
    dec = record.decision
    score = dec.score if dec is not None else None
    pvalue = dec.threshold_or_pvalue if dec is not None and record.method == METHOD_TRAC else None
    tau = dec.threshold_or_pvalue if dec is not None and record.method != METHOD_TRAC else None
    verdict = dec.verdict.value if dec is not None else ""
    seconds = record.seconds if timings else None
    fields = [
        record.task_id,
        record.method,
        record.n,
        record.param,
        verdict,
        record.truth,
        score,
        pvalue,
        tau,
        seconds,
    ]
    return ",".join(_fmt(f) for f in fields)


def record_text_line(record: BenchRecord, timings: bool = False) -> str:
    dec = record.decision
    parts = [
        f"scenario={record.task_id}",
        f"method={record.method}",
        f"n={record.n}",
        f"param={_fmt(record.param)}",
        f"decision={dec.verdict.value if dec is not None else ''}",
        f"truth={record.truth}",
        f"score={_fmt(dec.score if dec else None)}",
    ]
    if dec is not None and record.method == METHOD_TRAC:
        parts.append(f"pvalue={_fmt(dec.threshold_or_pvalue)}")
    elif dec is not None:
        parts.append(f"tau={_fmt(dec.threshold_or_pvalue)}")
    for key, value in sorted(record.extras.items()):
        if key not in ("tau", "pvalue"):
            parts.append(f"{key}={_fmt(value)}")
    parts.append(f"checksum={record.checksum}")
    if timings:
        parts.append(f"seconds={record.seconds:.3f}")
    if record.failure:
        parts.append(f"failure={record.failure!r}")
    return " ".join(parts)


def summary_csv_row(method: str, s: MetricsSummary) -> str:
    fields = [
        method,
        s.n,
        s.n_decided,
        s.n_correct,
        s.n_wrong,
        s.coverage,
        s.decided_accuracy,
        s.risk,
        s.wilson_low,
        s.wilson_high,
    ]
    return ",".join(_fmt(f) for f in fields)
