"""Cross-fitted nonparametric regression in both directions.

Residuals are out-of-fold: the model predicting point i is trained on the
complement of i's fold, which decouples nuisance estimation from the
geometry read off the residual clouds downstream.  The backbone is a
penalized cubic B-spline with a ridge penalty on second differences of the
coefficients and the penalty chosen by generalized cross-validation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import BSpline
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .errors import DegenerateRegressor, InsufficientData, InvalidInput
from .rng import generator

Y_GIVEN_X = "y|x"
X_GIVEN_Y = "x|y"

_DEFAULT_PENALTY_GRID = tuple(np.logspace(-6.0, 2.0, 20))
_MAX_KNOTS = 35


@dataclass(frozen=True)
class SmootherConfig:
    """Penalized-spline settings.

    ``basis_knots=None`` applies the size rule max(4, min(n_train//4, 35))
    per training set; an explicit value (>= 4) pins the interior knot count.
    """

    basis_knots: int | None = None
    penalty_grid: tuple = _DEFAULT_PENALTY_GRID
    selection: str = "gcv"

    def __post_init__(self):
        if self.basis_knots is not None and self.basis_knots < 4:
            raise InvalidInput("basis_knots must be >= 4")
        grid = tuple(float(p) for p in self.penalty_grid)
        if len(grid) == 0:
            raise InvalidInput("penalty_grid must be nonempty")
        if not all(np.isfinite(grid)) or any(p < 0 for p in grid):
            raise InvalidInput("penalties must be finite and nonnegative")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise InvalidInput("penalty_grid must be strictly increasing")
        object.__setattr__(self, "penalty_grid", grid)
        if self.selection != "gcv":
            raise InvalidInput(f"unknown selection rule {self.selection!r}")


@dataclass(frozen=True)
class FoldAssignment:
    """Deterministic K-fold partition of {0..n-1} (folds labeled 1..K)."""

    n: int
    K: int
    fold_of: np.ndarray
    seed: int

    def train_mask(self, k: int) -> np.ndarray:
        return self.fold_of != k

    def test_mask(self, k: int) -> np.ndarray:
        return self.fold_of == k


@dataclass(frozen=True)
class ResidualCloud:
    """Out-of-fold residuals paired with their regressor coordinate."""

    regressor: np.ndarray
    residual: np.ndarray
    direction: str

    @property
    def n(self) -> int:
        return self.regressor.size

    def points(self) -> np.ndarray:
        return np.column_stack((self.regressor, self.residual))


def assign_folds(n: int, K: int, seed: int) -> FoldAssignment:
    """Seeded shuffle of {0..n-1} split contiguously into K near-equal folds."""
    if K < 2:
        raise InvalidInput("need at least 2 folds")
    if n < 2 * K:
        raise InsufficientData(f"n={n} too small for K={K} folds (need n >= 2K)")
    perm = generator(seed).permutation(n)
    fold_of = np.empty(n, dtype=np.int64)
    base, rem = divmod(n, K)
    start = 0
    for k in range(1, K + 1):
        size = base + (1 if k <= rem else 0)
        fold_of[perm[start : start + size]] = k
        start += size
    return FoldAssignment(n=n, K=K, fold_of=fold_of, seed=seed)


class SmootherModel:
    """Fitted penalized cubic spline with linear extrapolation outside the data range."""

    def __init__(self, spline: BSpline, x_lo: float, x_hi: float, penalty: float, edf: float):
        self._spline = spline
        self.x_lo = x_lo
        self.x_hi = x_hi
        self.penalty = penalty
        self.edf = edf
        der = spline.derivative(1)
        self.value_lo = float(spline(x_lo))
        self.value_hi = float(spline(x_hi))
        self.slope_lo = float(der(x_lo))
        self.slope_hi = float(der(x_hi))

    def predict(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        out = np.empty_like(x)
        inside = (x >= self.x_lo) & (x <= self.x_hi)
        if inside.any():
            out[inside] = self._spline(x[inside])
        left = x < self.x_lo
        if left.any():
            out[left] = self.value_lo + self.slope_lo * (x[left] - self.x_lo)
        right = x > self.x_hi
        if right.any():
            out[right] = self.value_hi + self.slope_hi * (x[right] - self.x_hi)
        return out[0] if scalar else out


def _knot_vector(x: np.ndarray, n_interior: int) -> np.ndarray:
    x_lo, x_hi = float(x.min()), float(x.max())
    qs = np.arange(1, n_interior + 1) / (n_interior + 1)
    interior = np.unique(np.quantile(x, qs))
    interior = interior[(interior > x_lo) & (interior < x_hi)]
    return np.concatenate((np.full(4, x_lo), interior, np.full(4, x_hi)))


def _second_difference(knots: np.ndarray, p: int) -> np.ndarray:
    """Divided second differences of coefficients at the Greville sites.

    With quantile (non-uniform) knots, plain [1, -2, 1] differences would
    penalize linear trends; dividing by the local Greville gaps keeps the
    null space exactly {constant, linear}, so affine data is penalty-free.
    Rows are rescaled by the mean gap squared, reducing to [1, -2, 1] when
    the knots are uniform.
    """
    greville = (knots[1:-3] + knots[2:-2] + knots[3:-1]) / 3.0
    gaps = np.diff(greville)
    scale = float(np.mean(gaps)) ** 2
    d = np.zeros((p - 2, p))
    for i in range(p - 2):
        a = 1.0 / gaps[i]
        b = 1.0 / gaps[i + 1]
        d[i, i : i + 3] = (scale * a, -scale * (a + b), scale * b)
    return d


def fit_smoother(x, y, cfg: SmootherConfig = SmootherConfig()) -> SmootherModel:
    """Fit y on x with a GCV-tuned penalized cubic B-spline.

    Raises DegenerateRegressor when x is constant and InvalidInput on
    non-finite entries; prediction is defined on all of R via linear
    extrapolation beyond the training range.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1 or x.size != y.size:
        raise InvalidInput("x and y must be 1-d vectors of equal length")
    n = x.size
    if n < 8:
        raise InsufficientData(f"smoother needs n >= 8, got {n}")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise InvalidInput("smoother input contains non-finite values")
    if x.min() == x.max():
        raise DegenerateRegressor("regressor is constant")

    n_interior = cfg.basis_knots if cfg.basis_knots is not None else max(4, min(n // 4, _MAX_KNOTS))
    t = _knot_vector(x, n_interior)
    basis = BSpline.design_matrix(x, t, 3).toarray()
    p = basis.shape[1]
    gram = basis.T @ basis
    rhs = basis.T @ y
    pen = _second_difference(t, p)
    pen = pen.T @ pen

    best = None  # (gcv, penalty, coef, edf)
    for lam in cfg.penalty_grid:
        a = gram + lam * pen
        try:
            factor = cho_factor(a, lower=True, check_finite=False)
        except LinAlgError:
            continue
        coef = cho_solve(factor, rhs, check_finite=False)
        fitted = basis @ coef
        rss = float(np.sum((y - fitted) ** 2))
        edf = float(np.trace(cho_solve(factor, gram, check_finite=False)))
        denom = n - edf
        if denom <= 1e-8:
            continue
        gcv = n * rss / denom**2
        if best is None or gcv < best[0]:
            best = (gcv, lam, coef, edf)
    if best is None:
        # every grid point was numerically unusable; fall back to a plain
        # least-squares fit at the largest penalty
        lam = cfg.penalty_grid[-1]
        coef = np.linalg.lstsq(gram + lam * pen, rhs, rcond=None)[0]
        best = (np.inf, lam, coef, float(p))

    _, lam, coef, edf = best
    spline = BSpline(t, coef, 3, extrapolate=True)
    return SmootherModel(spline, float(x.min()), float(x.max()), lam, edf)


def cross_fit_residuals(sample, folds: FoldAssignment, cfg: SmootherConfig = SmootherConfig()):
    """Out-of-fold residual clouds for both regression directions.

    For each fold k the forward model (y on x) and backward model (x on y)
    are trained on the complement of fold k and evaluated on fold k only.
    Returns (cloud for y|x, cloud for x|y), each of size n.
    """
    x, y = sample.x, sample.y
    if folds.n != x.size:
        raise InvalidInput("fold assignment does not match sample size")
    res_forward = np.empty(x.size)
    res_backward = np.empty(x.size)
    for k in range(1, folds.K + 1):
        train = folds.train_mask(k)
        test = folds.test_mask(k)
        model_f = fit_smoother(x[train], y[train], cfg)
        res_forward[test] = y[test] - model_f.predict(x[test])
        model_b = fit_smoother(y[train], x[train], cfg)
        res_backward[test] = x[test] - model_b.predict(y[test])
    return (
        ResidualCloud(regressor=x, residual=res_forward, direction=Y_GIVEN_X),
        ResidualCloud(regressor=y, residual=res_backward, direction=X_GIVEN_Y),
    )
