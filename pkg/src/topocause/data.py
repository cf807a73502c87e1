"""Observed bivariate samples."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInput


@dataclass(frozen=True)
class PairSample:
    """One observed (x, y) dataset plus provenance metadata."""

    x: np.ndarray
    y: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        x = np.ascontiguousarray(self.x, dtype=np.float64)
        y = np.ascontiguousarray(self.y, dtype=np.float64)
        if x.ndim != 1 or y.ndim != 1 or x.size != y.size:
            raise InvalidInput("x and y must be 1-d vectors of equal length")
        if x.size == 0:
            raise InvalidInput("empty sample")
        if not (np.isfinite(x).all() and np.isfinite(y).all()):
            raise InvalidInput("sample contains non-finite values")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.x.size

    def swapped(self) -> "PairSample":
        """The same sample with the roles of x and y exchanged."""
        return PairSample(self.y, self.x, dict(self.meta))

    def checksum(self) -> str:
        """Short content hash, used to assert paired evaluation."""
        h = hashlib.sha256()
        h.update(self.x.tobytes())
        h.update(self.y.tobytes())
        return h.hexdigest()[:12]
