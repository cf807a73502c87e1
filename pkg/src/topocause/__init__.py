"""Bivariate causal direction from the geometry of residual clouds.

Cross-fitted regressions in both directions produce residual clouds; after
rank-copula standardization, the cloud in the causal direction stays a 2-d
bulk while the reverse cloud collapses toward a curve.  A windowed MST
edge-length profile quantifies the contrast, with a smoothed variant for
fixed noise and a bootstrap-calibrated abstention test for confounding.
"""

from .data import PairSample
from .regression import (
    FoldAssignment,
    ResidualCloud,
    SmootherConfig,
    assign_folds,
    cross_fit_residuals,
    fit_smoother,
)
from .copula import CopulaCloud, copula_standardize, rank_gaussianize, rank_transform
from .topology import (
    MstEdges,
    WindowConfig,
    euclidean_mst,
    mesoscopic_window,
    psi_window,
    single_linkage_deaths,
    tp_profile,
)
from .scoring import (
    BinnedCloud,
    Decision,
    ScoreConfig,
    ScoreResult,
    ThresholdConfig,
    Verdict,
    bin_reverse_cloud,
    choose_bins,
    decide,
    stability_threshold,
    tra_score,
    tras_score,
)
from .trac import (
    TracConfig,
    TracResult,
    empirical_inverse_cdf,
    fit_gaussian_copula_rho,
    sample_null,
    trac_pvalue,
)
from .synth import Scenario, ScenarioKind, generate, sweep_grid
from .bench import (
    BenchRecord,
    BenchTask,
    MetricsSummary,
    load_pairs,
    run_benchmark,
    run_method,
    summaries_by_method,
    summarize,
    tasks_from_pairs,
    tasks_from_scenarios,
    wilson_interval,
)
from ._mst import backend as mst_backend

__version__ = "0.1.0"

__all__ = [
    "PairSample",
    "FoldAssignment",
    "ResidualCloud",
    "SmootherConfig",
    "assign_folds",
    "cross_fit_residuals",
    "fit_smoother",
    "CopulaCloud",
    "copula_standardize",
    "rank_gaussianize",
    "rank_transform",
    "MstEdges",
    "WindowConfig",
    "euclidean_mst",
    "mesoscopic_window",
    "psi_window",
    "single_linkage_deaths",
    "tp_profile",
    "BinnedCloud",
    "Decision",
    "ScoreConfig",
    "ScoreResult",
    "ThresholdConfig",
    "Verdict",
    "bin_reverse_cloud",
    "choose_bins",
    "decide",
    "stability_threshold",
    "tra_score",
    "tras_score",
    "TracConfig",
    "TracResult",
    "empirical_inverse_cdf",
    "fit_gaussian_copula_rho",
    "sample_null",
    "trac_pvalue",
    "Scenario",
    "ScenarioKind",
    "generate",
    "sweep_grid",
    "BenchRecord",
    "BenchTask",
    "MetricsSummary",
    "load_pairs",
    "run_benchmark",
    "run_method",
    "summaries_by_method",
    "summarize",
    "tasks_from_pairs",
    "tasks_from_scenarios",
    "wilson_interval",
    "mst_backend",
]
