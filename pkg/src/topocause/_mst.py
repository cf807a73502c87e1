"""Dense Prim MST kernel: numba-jitted hot path with a numpy fallback.

The jitted kernel is used unless numba is unavailable or the environment
variable ``TOPOCAUSE_NO_NUMBA`` is set (any non-empty value).  Both paths
run the same O(n^2)-time, O(n)-memory algorithm with the same floating
point operation order per edge, so they return identical length multisets.
``benchmarks/bench_mst.py`` times one against the other.
"""

from __future__ import annotations

import math
import os

import numpy as np

_FORCE_NUMPY = bool(os.environ.get("TOPOCAUSE_NO_NUMBA", ""))

try:
    if _FORCE_NUMPY:
        raise ImportError("numba disabled via TOPOCAUSE_NO_NUMBA")
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:
    _HAVE_NUMBA = False


def _prim_numpy(pts: np.ndarray) -> np.ndarray:
    """Vectorized Prim on a (n, 2) float64 array; returns n-1 edge lengths."""
    n = pts.shape[0]
    xs = pts[:, 0]
    ys = pts[:, 1]
    best = np.full(n, np.inf)
    outside = np.ones(n, dtype=bool)
    outside[0] = False
    lengths = np.empty(n - 1)
    cur = 0
    for step in range(n - 1):
        dx = xs - xs[cur]
        dy = ys - ys[cur]
        d = np.sqrt(dx * dx + dy * dy)
        np.minimum(best, d, out=best, where=outside)
        nxt = int(np.argmin(best))
        lengths[step] = best[nxt]
        outside[nxt] = False
        best[nxt] = np.inf
        cur = nxt
    return lengths


if _HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _prim_numba(pts):  # pragma: no cover - exercised via mst_lengths
        n = pts.shape[0]
        best = np.full(n, np.inf)
        outside = np.ones(n, np.bool_)
        outside[0] = False
        lengths = np.empty(n - 1)
        cur = 0
        for step in range(n - 1):
            cx = pts[cur, 0]
            cy = pts[cur, 1]
            for j in range(n):
                if outside[j]:
                    dx = pts[j, 0] - cx
                    dy = pts[j, 1] - cy
                    d = math.sqrt(dx * dx + dy * dy)
                    if d < best[j]:
                        best[j] = d
            nxt = -1
            m = np.inf
            for j in range(n):
                if outside[j] and best[j] < m:
                    m = best[j]
                    nxt = j
            lengths[step] = m
            outside[nxt] = False
            best[nxt] = np.inf
            cur = nxt
        return lengths


def backend() -> str:
    """Name of the active kernel backend ("numba" or "numpy")."""
    return "numba" if _HAVE_NUMBA else "numpy"


def mst_lengths(pts: np.ndarray) -> np.ndarray:
    """Edge-length multiset (unsorted) of the Euclidean MST of ``pts``."""
    pts = np.ascontiguousarray(pts, dtype=np.float64)
    if _HAVE_NUMBA:
        return _prim_numba(pts)
    return _prim_numpy(pts)
