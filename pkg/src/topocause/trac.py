"""Confounding-aware abstention via a Gaussian-copula plug-in bootstrap.

The working null is "dependence without direction": after rank
Gaussianization the pair is treated as bivariate normal with plug-in
correlation.  Bootstrap resamples push correlated normal pairs through the
empirical marginal quantiles, the observed |score| is compared against the
bootstrap scores, and a direction is returned only when it is extreme.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .copula import rank_gaussianize
from .data import PairSample
from .errors import BootstrapFailure, DegenerateInput, InsufficientData, InvalidInput
from .rng import generator, mix64, standard_normal
from .scoring import (
    Decision,
    ScoreConfig,
    VARIANT_TRA,
    VARIANT_TRAS,
    Verdict,
    tra_score,
    tras_score,
)

METHOD_TRAC = "trac"


@dataclass(frozen=True)
class TracConfig:
    bootstraps: int = 500
    alpha: float = 0.10
    score_variant: str = VARIANT_TRA
    seed: int = 0
    rho_clip: float = 0.999

    def __post_init__(self):
        if self.bootstraps < 1:
            raise InvalidInput("need at least 1 bootstrap replicate")
        if not (0.0 < self.alpha < 1.0):
            raise InvalidInput("alpha must lie in (0, 1)")
        if self.score_variant not in (VARIANT_TRA, VARIANT_TRAS):
            raise InvalidInput(f"unknown score variant {self.score_variant!r}")
        if not (0.0 < self.rho_clip < 1.0):
            raise InvalidInput("rho_clip must lie in (0, 1)")


@dataclass(frozen=True)
class TracResult:
    p_value: float
    rho_hat: float
    s_obs: float
    verdict: Decision


def fit_gaussian_copula_rho(sample: PairSample, rho_clip: float = 0.999, ties: str = "stable") -> float:
    """Pearson correlation of the rank-Gaussianized marginals, clipped to +-rho_clip."""
    if sample.n < 3:
        raise InsufficientData("copula fit needs n >= 3")
    zx = rank_gaussianize(sample.x, ties)
    zy = rank_gaussianize(sample.y, ties)
    sx = float(np.std(zx))
    sy = float(np.std(zy))
    if sx <= 0.0 or sy <= 0.0:
        raise DegenerateInput("zero variance after rank Gaussianization")
    rho = float(np.mean((zx - zx.mean()) * (zy - zy.mean())) / (sx * sy))
    return float(np.clip(rho, -rho_clip, rho_clip))


def empirical_inverse_cdf(sorted_sample, u):
    """Type-1 inverse CDF: order statistic at index ceil(u*n), clamped to [1, n]."""
    arr = np.asarray(sorted_sample, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInput("sorted_sample must be a nonempty 1-d vector")
    u_arr = np.asarray(u, dtype=np.float64)
    idx = np.ceil(u_arr * arr.size).astype(np.int64)
    idx = np.clip(idx, 1, arr.size)
    out = arr[idx - 1]
    return float(out) if np.isscalar(u) or u_arr.ndim == 0 else out


def sample_null(rho_hat: float, x_sorted, y_sorted, n: int, seed: int) -> PairSample:
    """Draw n pairs from the fitted null: correlated normals pushed through the empirical marginals."""
    x_sorted = np.asarray(x_sorted, dtype=np.float64)
    y_sorted = np.asarray(y_sorted, dtype=np.float64)
    if x_sorted.size != n or y_sorted.size != n:
        raise InvalidInput("marginal samples must have length n")
    rng = generator(seed)
    z_x = standard_normal(rng, n)
    w = standard_normal(rng, n)
    z_y = rho_hat * z_x + np.sqrt(1.0 - rho_hat * rho_hat) * w
    x_star = empirical_inverse_cdf(x_sorted, ndtr(z_x))
    y_star = empirical_inverse_cdf(y_sorted, ndtr(z_y))
    return PairSample(x_star, y_star, {"null_seed": seed})


def trac_pvalue(
    sample: PairSample,
    cfg: TracConfig = TracConfig(),
    score_cfg: ScoreConfig = ScoreConfig(),
    scorer=None,
    threads: int = 1,
) -> TracResult:
    """Calibrated direction test with abstention.

    Scores the observed pair, fits the Gaussian-copula correlation, scores
    B null resamples (replicate b is seeded mix64(cfg.seed, b)), and forms
    the conservative Monte-Carlo p-value (1 + #{|S*_b| >= |S|}) / (B + 1).
    Abstains when p > alpha, otherwise returns the sign of the observed
    score.  A custom ``scorer(sample, seed)`` may replace the built-in one.
    """
    if scorer is None:
        base = tras_score if cfg.score_variant == VARIANT_TRAS else tra_score

        def scorer(s, seed):
            return base(s, seed, score_cfg)

    def score_value(s, seed):
        res = scorer(s, seed)
        return res.score if hasattr(res, "score") else float(res)

    signed = float(score_value(sample, cfg.seed))
    s_obs = abs(signed)
    rho = fit_gaussian_copula_rho(sample, cfg.rho_clip, score_cfg.ties)
    x_sorted = np.sort(sample.x)
    y_sorted = np.sort(sample.y)
    n = sample.n

    def one_replicate(b: int) -> float:
        rep_seed = mix64(cfg.seed, b)
        null = sample_null(rho, x_sorted, y_sorted, n, rep_seed)
        try:
            return abs(float(score_value(null, rep_seed)))
        except Exception as exc:
            raise BootstrapFailure(b, exc) from exc

    reps = range(1, cfg.bootstraps + 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            boot = np.fromiter(pool.map(one_replicate, reps), dtype=np.float64, count=cfg.bootstraps)
    else:
        boot = np.fromiter((one_replicate(b) for b in reps), dtype=np.float64, count=cfg.bootstraps)

    exceed = int(np.sum(boot >= s_obs))
    p_value = (1 + exceed) / (cfg.bootstraps + 1)
    if p_value > cfg.alpha or signed == 0.0:
        verdict = Verdict.ABSTAIN
    elif signed > 0:
        verdict = Verdict.X_TO_Y
    else:
        verdict = Verdict.Y_TO_X
    decision = Decision(verdict=verdict, score=signed, threshold_or_pvalue=p_value, method=METHOD_TRAC)
    return TracResult(p_value=p_value, rho_hat=rho, s_obs=s_obs, verdict=decision)
