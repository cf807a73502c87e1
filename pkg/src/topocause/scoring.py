"""Direction scores and the symmetric reject rule.

The base score contrasts the windowed MST profiles of the two
copula-standardized residual clouds; its sign orients the pair.  The
smoothed variant additionally bin-averages the reverse residuals along the
conditioning copula axis, which restores the tube collapse when the noise
does not vanish, and is symmetrized so that swapping x and y negates it
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.special import ndtri

from .copula import copula_standardize, rank_transform
from .data import PairSample
from .errors import InsufficientData, InvalidInput, StabilityFailure
from .regression import SmootherConfig, assign_folds, cross_fit_residuals
from .rng import generator, mix64
from .topology import WindowConfig, mesoscopic_window, tp_profile

VARIANT_TRA = "tra"
VARIANT_TRAS = "tras"


class Verdict(str, Enum):
    X_TO_Y = "x->y"
    Y_TO_X = "y->x"
    ABSTAIN = "abstain"


@dataclass(frozen=True)
class ScoreConfig:
    """Shared settings for both score variants."""

    folds: int = 5
    window: WindowConfig = WindowConfig()
    smoother: SmootherConfig = SmootherConfig()
    ties: str = "stable"
    # tras only: rescale reverse residuals to unit sample variance before
    # binning so the vertical scale is comparable to the unit u-axis
    scale_reverse_residuals: bool = True


@dataclass(frozen=True)
class ScoreResult:
    score: float
    tp_forward: float
    tp_reverse: float
    variant: str
    diagnostics: dict = field(default_factory=dict)


@dataclass(frozen=True)
class BinnedCloud:
    """Nonempty-bin means of (u, residual) over equal-width bins on (0, 1]."""

    points: np.ndarray
    B_n: int
    m_n: int
    occupancy: np.ndarray


@dataclass(frozen=True)
class ThresholdConfig:
    """Stability threshold: R subsample scores, tau = z_{1-alpha/2} * sd."""

    subsamples: int = 50
    fraction: float = 0.8
    alpha: float = 0.10
    seed: int = 0

    def __post_init__(self):
        if self.subsamples < 2:
            raise InvalidInput("need at least 2 subsamples")
        if not (0.0 < self.fraction < 1.0):
            raise InvalidInput("fraction must lie in (0, 1)")
        if not (0.0 < self.alpha < 1.0):
            raise InvalidInput("alpha must lie in (0, 1)")


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    score: float
    threshold_or_pvalue: float
    method: str


def choose_bins(n: int) -> int:
    """Bin count max(4, ceil(n^(2/5))), computed in exact integer arithmetic.

    ceil(n^(2/5)) is the smallest integer B with B^5 >= n^2, which avoids
    float-pow rounding flipping the boundary cases (e.g. n = 32).
    """
    if n < 20:
        raise InsufficientData("binning rule needs n >= 20")
    target = n * n
    b = max(1, int(round(float(n) ** 0.4)))
    while b**5 < target:
        b += 1
    while b > 1 and (b - 1) ** 5 >= target:
        b -= 1
    return max(4, b)


def bin_reverse_cloud(u, residuals, B_n: int) -> BinnedCloud:
    """Mean (u, residual) per nonempty equal-width bin of (0, 1]."""
    u = np.asarray(u, dtype=np.float64)
    r = np.asarray(residuals, dtype=np.float64)
    if u.ndim != 1 or u.shape != r.shape:
        raise InvalidInput("u and residuals must be 1-d vectors of equal length")
    if B_n < 2:
        raise InvalidInput("need at least 2 bins")
    if u.size == 0 or not ((u > 0) & (u < 1)).all():
        raise InvalidInput("u values must lie in (0, 1)")
    idx = np.ceil(u * B_n).astype(np.int64)
    np.clip(idx, 1, B_n, out=idx)
    counts = np.bincount(idx, minlength=B_n + 1)[1:]
    sum_u = np.bincount(idx, weights=u, minlength=B_n + 1)[1:]
    sum_r = np.bincount(idx, weights=r, minlength=B_n + 1)[1:]
    nonempty = counts > 0
    means = np.column_stack((sum_u[nonempty] / counts[nonempty], sum_r[nonempty] / counts[nonempty]))
    return BinnedCloud(points=means, B_n=B_n, m_n=int(nonempty.sum()), occupancy=counts)


def _clouds(sample: PairSample, seed: int, cfg: ScoreConfig):
    folds = assign_folds(sample.n, cfg.folds, seed)
    return cross_fit_residuals(sample, folds, cfg.smoother)


def tra_score(sample: PairSample, seed: int, cfg: ScoreConfig = ScoreConfig()) -> ScoreResult:
    """Signed score in [-1, 1]: forward-cloud profile minus reverse-cloud profile."""
    if sample.n < 20:
        raise InsufficientData(f"tra needs n >= 20, got {sample.n}")
    forward, reverse = _clouds(sample, seed, cfg)
    cloud_f = copula_standardize(forward, cfg.ties)
    cloud_r = copula_standardize(reverse, cfg.ties)
    alpha, beta = mesoscopic_window(sample.n, cfg.window)
    tp_f = tp_profile(cloud_f.points, alpha, beta)
    tp_r = tp_profile(cloud_r.points, alpha, beta)
    return ScoreResult(
        score=tp_f - tp_r,
        tp_forward=tp_f,
        tp_reverse=tp_r,
        variant=VARIANT_TRA,
        diagnostics={"alpha": alpha, "beta": beta, "n": sample.n},
    )


def _orientation_stat(forward_cloud, reverse_cloud, n: int, cfg: ScoreConfig):
    """One-orientation smoothed statistic: raw forward profile minus binned reverse profile."""
    cloud_f = copula_standardize(forward_cloud, cfg.ties)
    alpha, beta = mesoscopic_window(n, cfg.window)
    tp_f = tp_profile(cloud_f.points, alpha, beta)

    u = rank_transform(reverse_cloud.regressor, cfg.ties)
    r = reverse_cloud.residual
    if cfg.scale_reverse_residuals:
        sd = float(np.std(r, ddof=1))
        if np.isfinite(sd) and sd > 0:
            r = r / sd
    binned = bin_reverse_cloud(u, r, choose_bins(n))
    if binned.m_n >= 2:
        alpha_b, beta_b = mesoscopic_window(binned.m_n, cfg.window)
        tp_b = tp_profile(binned.points, alpha_b, beta_b)
    else:
        alpha_b = beta_b = float("nan")
        tp_b = 0.0
    diag = {
        "tp_forward_raw": tp_f,
        "tp_reverse_binned": tp_b,
        "bins": binned.B_n,
        "nonempty_bins": binned.m_n,
        "binned_window": (alpha_b, beta_b),
    }
    return tp_f - tp_b, diag


def tras_score(sample: PairSample, seed: int, cfg: ScoreConfig = ScoreConfig()) -> ScoreResult:
    """Symmetrized smoothed score: stat(x->y) - stat(y->x), each in [-1, 1]."""
    if sample.n < 40:
        raise InsufficientData(f"tras needs n >= 40, got {sample.n}")
    forward, reverse = _clouds(sample, seed, cfg)
    stat_xy, diag_xy = _orientation_stat(forward, reverse, sample.n, cfg)
    stat_yx, diag_yx = _orientation_stat(reverse, forward, sample.n, cfg)
    alpha, beta = mesoscopic_window(sample.n, cfg.window)
    return ScoreResult(
        score=stat_xy - stat_yx,
        tp_forward=stat_xy,
        tp_reverse=stat_yx,
        variant=VARIANT_TRAS,
        diagnostics={"alpha": alpha, "beta": beta, "n": sample.n, "xy": diag_xy, "yx": diag_yx},
    )


def stability_threshold(sample: PairSample, scorer, cfg: ThresholdConfig = ThresholdConfig()) -> float:
    """tau = z_{1-alpha/2} * sd of the score over R seeded subsamples.

    Each subsample keeps floor(fraction * n) rows without replacement;
    subsample r draws its rows and scores with seed mix64(cfg.seed, r).
    ``scorer(subsample, seed)`` may return a ScoreResult or a bare float.
    """
    n = sample.n
    m = int(cfg.fraction * n)
    if m < 2:
        raise InsufficientData("subsample size too small")
    scores = np.empty(cfg.subsamples)
    for r in range(1, cfg.subsamples + 1):
        sub_seed = mix64(cfg.seed, r)
        rows = generator(sub_seed).choice(n, size=m, replace=False)
        sub = PairSample(sample.x[rows], sample.y[rows])
        try:
            res = scorer(sub, sub_seed)
        except Exception as exc:
            raise StabilityFailure(r, exc) from exc
        scores[r - 1] = res.score if hasattr(res, "score") else float(res)
    if scores.max() == scores.min():
        return 0.0
    z = float(ndtri(1.0 - cfg.alpha / 2.0))
    return z * float(np.std(scores, ddof=1))


def decide(score: float, tau: float, method: str = VARIANT_TRA) -> Decision:
    """Symmetric reject rule with strict inequalities (ties at +-tau abstain)."""
    if tau < 0:
        raise InvalidInput("tau must be nonnegative")
    if score > tau:
        verdict = Verdict.X_TO_Y
    elif score < -tau:
        verdict = Verdict.Y_TO_X
    else:
        verdict = Verdict.ABSTAIN
    return Decision(verdict=verdict, score=float(score), threshold_or_pvalue=float(tau), method=method)
