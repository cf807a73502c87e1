"""Command-line surface: single-pair decisions and benchmark sweeps.

All randomness is controlled by --seed, every output file embeds the
config echo in its header, and wall-clock timing goes to stderr so that
reports and result files are byte-identical across reruns.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import __version__
from .bench import (
    RECORD_CSV_HEADER,
    SUMMARY_CSV_HEADER,
    _read_matrix,
    load_pairs,
    record_csv_row,
    record_text_line,
    run_benchmark,
    summaries_by_method,
    summary_csv_row,
    tasks_from_pairs,
    tasks_from_scenarios,
)
from .data import PairSample
from .errors import TopocauseError
from .regression import SmootherConfig
from .scoring import ScoreConfig, ThresholdConfig, decide, stability_threshold, tra_score, tras_score
from .synth import DEFAULT_PARAMS, SWEEP_PARAM, ScenarioKind, sweep_grid
from .topology import WindowConfig
from .trac import TracConfig, trac_pvalue

METHODS = ("tra", "tras", "trac")


@dataclass
class RunConfig:
    """Flat run configuration; serializable to key=value lines."""

    method: str = "tra"
    kappa: float = 1.0
    cbeta: float = 2.0
    folds: int = 5
    boot: int = 500
    alpha: float = 0.10
    stability_R: int = 50
    frac: float = 0.8
    seed: int = 0
    max_samples: int = 2000
    threads: int = 1
    ties: str = "stable"
    knots: int | None = None
    timings: bool = False

    def score_config(self) -> ScoreConfig:
        return ScoreConfig(
            folds=self.folds,
            window=WindowConfig(self.kappa, self.cbeta),
            smoother=SmootherConfig(basis_knots=self.knots),
            ties=self.ties,
        )

    def threshold_config(self) -> ThresholdConfig:
        return ThresholdConfig(
            subsamples=self.stability_R, fraction=self.frac, alpha=self.alpha, seed=self.seed
        )

    def trac_config(self) -> TracConfig:
        variant = "tras" if self.method == "tras" else "tra"
        return TracConfig(bootstraps=self.boot, alpha=self.alpha, score_variant=variant, seed=self.seed)

    def echo_lines(self) -> list[str]:
        lines = [f"topocause={__version__}"]
        for f in fields(self):
            value = getattr(self, f.name)
            lines.append(f"{f.name}={'none' if value is None else value}")
        return lines

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        known = {f.name: f for f in fields(cls)}
        kwargs = {}
        with open(path) as fh:
            for line_no, raw in enumerate(fh, 1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise TopocauseError(f"{path}:{line_no}: expected key=value")
                key, value = (s.strip() for s in line.split("=", 1))
                if key == "topocause":
                    continue
                if key not in known:
                    raise TopocauseError(f"{path}:{line_no}: unknown config key {key!r}")
                kwargs[key] = _coerce(value, known[key].type)
        return cls(**kwargs)


def _coerce(value: str, annotation: str):
    if value == "none":
        return None
    if "bool" in annotation:
        return value.lower() in ("1", "true", "yes")
    if "int" in annotation:
        return int(value)
    if "float" in annotation:
        return float(value)
    return value


_UNSET = object()  # distinguishes "flag not given" from "flag equals the default"


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--method", choices=METHODS, default=_UNSET, help="decision method (default tra)")
    parser.add_argument("--kappa", type=float, default=_UNSET, help="window scale (alpha = kappa * n^(-2/3); default 1)")
    parser.add_argument("--cbeta", type=float, default=_UNSET, help="window width ratio beta/alpha (default 2)")
    parser.add_argument("--folds", type=int, default=_UNSET, help="cross-fitting folds (default 5)")
    parser.add_argument("--boot", type=int, default=_UNSET, metavar="B", help="null bootstrap replicates (default 500)")
    parser.add_argument("--alpha", type=float, default=_UNSET, help="significance level (default 0.10)")
    parser.add_argument("--stability-R", type=int, default=_UNSET, dest="stability_R", help="stability subsamples (default 50)")
    parser.add_argument("--frac", type=float, default=_UNSET, help="stability subsample fraction (default 0.8)")
    parser.add_argument("--seed", type=int, default=_UNSET, help="base seed (default 0)")
    parser.add_argument("--max-samples", type=int, default=_UNSET, dest="max_samples", help="per-pair row cap (default 2000)")
    parser.add_argument("--threads", type=int, default=_UNSET, help="worker cap (default 1)")
    parser.add_argument("--ties", choices=("stable", "average"), default=_UNSET, help="rank tie rule (default stable)")
    parser.add_argument("--knots", type=int, default=_UNSET, help="interior spline knots (default: size rule)")
    parser.add_argument("--timings", action="store_true", default=_UNSET, help="write wall times into result files")
    parser.add_argument("--config", default=None, help="flat key=value config file (flags override)")
    parser.add_argument("--out", default=None)


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    for f in fields(RunConfig):
        value = getattr(args, f.name, _UNSET)
        if value is not _UNSET:
            setattr(cfg, f.name, value)
    return cfg


def _load_columns(path: Path, col_x: int, col_y: int):
    data = _read_matrix(path)
    needed = max(col_x, col_y)
    if data.shape[1] < needed:
        raise TopocauseError(f"{path}: needs column {needed}, file has {data.shape[1]}")
    x = data[:, col_x - 1]
    y = data[:, col_y - 1]
    keep = np.isfinite(x) & np.isfinite(y)
    return x[keep], y[keep]


def cmd_decide(args) -> int:
    cfg = _config_from_args(args)
    path = Path(args.input)
    if not path.is_file():
        print(f"error: input file not found: {path}", file=sys.stderr)
        return 2
    x, y = _load_columns(path, args.col_x, args.col_y)
    needs = 40 if cfg.method == "tras" else 20
    if x.size < needs:
        print(f"error: insufficient samples: {x.size} rows, method {cfg.method} needs >= {needs}", file=sys.stderr)
        return 2
    sample = PairSample(x, y, {"source": str(path)})

    score_cfg = cfg.score_config()
    start = time.perf_counter()
    lines = [f"# topocause decide v{__version__}"]
    lines += [f"# {line}" for line in cfg.echo_lines()[1:]]
    lines.append(f"n={sample.n}")
    if cfg.method == "trac":
        res = trac_pvalue(sample, cfg.trac_config(), score_cfg, threads=cfg.threads)
        decision = res.verdict
        lines.append(f"verdict={decision.verdict.value}")
        lines.append(f"score={decision.score:.10g}")
        lines.append(f"pvalue={res.p_value:.10g}")
        lines.append(f"rho={res.rho_hat:.10g}")
    else:
        base = tras_score if cfg.method == "tras" else tra_score

        def scorer(s, sd):
            return base(s, sd, score_cfg)

        tau = stability_threshold(sample, scorer, cfg.threshold_config())
        result = scorer(sample, cfg.seed)
        decision = decide(result.score, tau, method=cfg.method)
        lines.append(f"verdict={decision.verdict.value}")
        lines.append(f"score={decision.score:.10g}")
        lines.append(f"tau={tau:.10g}")
    elapsed = time.perf_counter() - start

    report = "\n".join(lines) + "\n"
    sys.stdout.write(report)
    if args.out:
        Path(args.out).write_text(report)
    print(f"wall_seconds={elapsed:.3f}", file=sys.stderr)
    return 0


def cmd_bench(args) -> int:
    cfg = _config_from_args(args)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in METHODS:
            print(f"error: unknown method {m!r}", file=sys.stderr)
            return 2
    if not methods:
        print("error: no methods selected", file=sys.stderr)
        return 2

    start = time.perf_counter()
    if args.pairs:
        if not args.meta:
            print("error: --pairs requires --meta", file=sys.stderr)
            return 2
        pairs = load_pairs(args.pairs, args.meta, cfg.max_samples, cfg.seed)
        tasks = tasks_from_pairs(pairs)
    else:
        if not args.kind:
            print("error: need --kind or --pairs", file=sys.stderr)
            return 2
        kind = ScenarioKind(args.kind)
        params = args.param if args.param else [DEFAULT_PARAMS[kind][SWEEP_PARAM[kind]]]
        scenarios = sweep_grid(kind, args.n, params, args.reps, cfg.seed)
        tasks = tasks_from_scenarios(scenarios)

    records = run_benchmark(
        tasks,
        methods,
        cfg.score_config(),
        cfg.threshold_config(),
        cfg.trac_config(),
        base_seed=cfg.seed,
        threads=cfg.threads,
    )
    elapsed = time.perf_counter() - start

    header = [f"# {line}" for line in cfg.echo_lines()]
    out_prefix = args.out or "bench"
    csv_lines = header + [RECORD_CSV_HEADER] + [record_csv_row(r, cfg.timings) for r in records]
    Path(f"{out_prefix}.csv").write_text("\n".join(csv_lines) + "\n")
    txt_lines = header + [record_text_line(r, cfg.timings) for r in records]
    Path(f"{out_prefix}.records").write_text("\n".join(txt_lines) + "\n")
    summaries = summaries_by_method(records)
    sum_lines = header + [SUMMARY_CSV_HEADER] + [summary_csv_row(m, s) for m, s in summaries.items()]
    Path(f"{out_prefix}.summary.csv").write_text("\n".join(sum_lines) + "\n")

    print(f"records={len(records)} tasks={len(tasks)} methods={','.join(methods)}")
    for method, s in summaries.items():
        row = f"method={method} records={s.n} coverage={s.coverage:.4f}"
        if s.decided_accuracy is not None:
            row += f" decided_accuracy={s.decided_accuracy:.4f} risk={s.risk:.4f}"
            row += f" wilson=[{s.wilson_low:.4f},{s.wilson_high:.4f}]"
        elif s.risk is not None:
            row += f" risk={s.risk:.4f}"
        else:
            row += " (no ground-truth direction: coverage only)"
        print(row)
    print(f"wall_seconds={elapsed:.3f}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topocause",
        description="Bivariate causal direction from residual-cloud geometry (with abstention).",
    )
    parser.add_argument("--version", action="version", version=f"topocause {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_decide = sub.add_parser("decide", help="decide the direction of one pair file")
    p_decide.add_argument("input", help="whitespace-separated numeric columns, one row per observation")
    p_decide.add_argument("--col-x", type=int, default=1, dest="col_x", help="1-based x column")
    p_decide.add_argument("--col-y", type=int, default=2, dest="col_y", help="1-based y column")
    _add_common(p_decide)
    p_decide.set_defaults(func=cmd_decide)

    p_bench = sub.add_parser("bench", help="run a synthetic sweep or a pairs directory")
    p_bench.add_argument("--kind", choices=[k.value for k in ScenarioKind], default=None)
    p_bench.add_argument("--n", type=int, nargs="+", default=[250])
    p_bench.add_argument("--param", type=float, nargs="+", default=None, help="stress parameter values")
    p_bench.add_argument("--reps", type=int, default=5)
    p_bench.add_argument("--methods", default="tra", help="comma-separated subset of tra,tras,trac")
    p_bench.add_argument("--pairs", default=None, help="directory of pair data files")
    p_bench.add_argument("--meta", default=None, help="pair metadata file")
    _add_common(p_bench)
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TopocauseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
