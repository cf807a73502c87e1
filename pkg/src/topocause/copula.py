"""Rank-based copula standardization.

Coordinates are replaced by pseudo-observations rank/(n+1), which depend on
the data only through its ordering.  This isolates the dependence structure
from marginal scale, skewness and monotone reparameterization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri
from scipy.stats import rankdata

from .errors import InvalidInput

TIE_MODES = ("stable", "average")


@dataclass(frozen=True)
class CopulaCloud:
    """A 2-d cloud mapped into the open unit square."""

    points: np.ndarray

    @property
    def n(self) -> int:
        return self.points.shape[0]


def rank_transform(v, ties: str = "stable") -> np.ndarray:
    """Pseudo-observations rank(v_i)/(n+1) in (0, 1).

    Parameters
    ----------
    v : array_like
        1-d finite vector.
    ties : {"stable", "average"}
        "stable" breaks ties by ascending original index, so tie-free and
        tied inputs alike map onto a permutation of {i/(n+1)}.  "average"
        assigns tied entries their midrank.

    Returns
    -------
    ndarray
        Values in [1/(n+1), n/(n+1)], invariant under strictly increasing
        transforms of v.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.size < 1:
        raise InvalidInput("rank_transform expects a nonempty 1-d vector")
    if not np.isfinite(v).all():
        raise InvalidInput("rank_transform input contains non-finite values")
    n = v.size
    if ties == "stable":
        order = np.argsort(v, kind="stable")
        ranks = np.empty(n)
        ranks[order] = np.arange(1, n + 1)
    elif ties == "average":
        ranks = rankdata(v, method="average")
    else:
        raise InvalidInput(f"unknown tie mode {ties!r}")
    return ranks / (n + 1)


def copula_standardize(cloud, ties: str = "stable") -> CopulaCloud:
    """Apply rank_transform independently to both coordinates of a cloud.

    Parameters
    ----------
    cloud : object with ``regressor`` and ``residual`` vectors, or (n, 2) array.

    Returns
    -------
    CopulaCloud
        Points inside the open unit square.
    """
    if hasattr(cloud, "regressor"):
        u = rank_transform(cloud.regressor, ties)
        w = rank_transform(cloud.residual, ties)
    else:
        pts = np.asarray(cloud, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 1:
            raise InvalidInput("expected a nonempty (n, 2) cloud")
        u = rank_transform(pts[:, 0], ties)
        w = rank_transform(pts[:, 1], ties)
    return CopulaCloud(np.column_stack((u, w)))


def rank_gaussianize(v, ties: str = "stable") -> np.ndarray:
    """Standard-normal scores ndtri(rank/(n+1)) of a vector (n >= 2)."""
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.size < 2:
        raise InvalidInput("rank_gaussianize expects a vector with n >= 2")
    return ndtri(rank_transform(v, ties))
