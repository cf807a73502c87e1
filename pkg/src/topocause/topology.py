"""Euclidean MST edge profiles at a mesoscopic scale.

The windowed profile measures how much single-linkage connectivity happens
inside a scale window [alpha, beta]: near 1 for two-dimensional bulk clouds
(many merges above alpha), near 0 for curve-like clouds (merges finish below
alpha).  The window shrinks as kappa * n^(-2/3), between the ~1/n spacing of
a sampled curve and the ~n^(-1/2) spacing of a planar bulk.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._mst import mst_lengths
from .errors import InsufficientData, InvalidInput, InvalidWindow, OracleSizeExceeded

_ORACLE_MAX = 200


@dataclass(frozen=True)
class WindowConfig:
    """Mesoscopic window parameters: alpha = kappa * n^(-2/3), beta = c_beta * alpha."""

    kappa: float = 1.0
    c_beta: float = 2.0

    def __post_init__(self):
        if not (self.kappa > 0):
            raise InvalidWindow("kappa must be positive")
        if not (self.c_beta > 1):
            raise InvalidWindow("c_beta must exceed 1")


@dataclass(frozen=True)
class MstEdges:
    """Multiset of the n-1 Euclidean MST edge lengths of a cloud."""

    lengths: np.ndarray

    def sorted(self) -> np.ndarray:
        return np.sort(self.lengths)


def mesoscopic_window(n: int, cfg: WindowConfig) -> tuple[float, float]:
    """Window (alpha, beta) for a cloud of size n."""
    if n < 2:
        raise InsufficientData("window needs n >= 2")
    alpha = cfg.kappa * float(n) ** (-2.0 / 3.0)
    return alpha, cfg.c_beta * alpha


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise InvalidInput("expected an (n, 2) point array")
    if not np.isfinite(pts).all():
        raise InvalidInput("points contain non-finite coordinates")
    return pts


def euclidean_mst(points) -> MstEdges:
    """Edge-length multiset of a Euclidean MST (dense Prim).

    When edge weights tie, any MST shares the same length multiset, so the
    result is well defined; duplicate points contribute zero-length edges.
    """
    pts = _as_points(points)
    if pts.shape[0] < 2:
        raise InsufficientData("MST needs at least 2 points")
    return MstEdges(mst_lengths(pts))


def psi_window(t, alpha: float, beta: float):
    """Soft window (min(t, beta) - alpha)_+ in [0, beta - alpha]."""
    if not (0 <= alpha < beta):
        raise InvalidWindow(f"need 0 <= alpha < beta, got ({alpha}, {beta})")
    return np.clip(np.minimum(t, beta) - alpha, 0.0, None)


def tp_profile(points, alpha: float, beta: float) -> float:
    """Normalized windowed MST profile, in [0, 1].

    Sum of psi_window over MST edge lengths, divided by (n-1)(beta-alpha).
    """
    edges = euclidean_mst(points)
    n = edges.lengths.size + 1
    return float(np.sum(psi_window(edges.lengths, alpha, beta)) / ((n - 1) * (beta - alpha)))


def single_linkage_deaths(points) -> np.ndarray:
    """Test oracle: naive agglomerative single-linkage merge heights.

    Independent of the Prim kernel; equals the MST edge-length multiset.
    O(n^3), so capped at n <= 200.
    """
    pts = _as_points(points)
    n = pts.shape[0]
    if n < 2:
        raise InsufficientData("single linkage needs at least 2 points")
    if n > _ORACLE_MAX:
        raise OracleSizeExceeded(f"oracle supports n <= {_ORACLE_MAX}, got {n}")
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=2))
    np.fill_diagonal(dist, np.inf)
    labels = np.arange(n)
    heights = []
    for _ in range(n - 1):
        # closest pair of points in distinct clusters
        masked = np.where(labels[:, None] != labels[None, :], dist, np.inf)
        i, j = np.unravel_index(np.argmin(masked), masked.shape)
        heights.append(masked[i, j])
        labels[labels == labels[j]] = labels[i]
    return np.array(heights)
