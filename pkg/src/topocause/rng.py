"""Seed mixing and reproducible sampling primitives.

Every stochastic step in the library derives its stream from a 64-bit seed
through ``mix64`` (a splitmix64 chain) and a counter-based Philox generator,
so reruns match bitwise and derived streams are order-independent.  Normal
variates are produced by the inverse-CDF transform of strictly-open uniforms
rather than a rejection sampler, which keeps the mapping from uniform stream
to output fully specified.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _splitmix64(z: int) -> int:
    z = (z + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def mix64(*parts: int) -> int:
    """Combine integers into one 64-bit seed via a splitmix64 chain."""
    h = _GOLDEN
    for p in parts:
        h = _splitmix64(h ^ (int(p) & _MASK64))
    return h


def generator(seed: int) -> np.random.Generator:
    """Philox generator keyed directly by ``seed`` (no global state)."""
    return np.random.Generator(np.random.Philox(key=seed & _MASK64))


def uniform_open01(rng: np.random.Generator, size) -> np.ndarray:
    """Uniforms on the open interval (0, 1) with 53-bit resolution."""
    k = rng.integers(0, 1 << 53, size=size, dtype=np.int64)
    return (k + 0.5) * 2.0**-53


def standard_normal(rng: np.random.Generator, size) -> np.ndarray:
    """N(0,1) draws as the inverse normal CDF of open uniforms."""
    return ndtri(uniform_open01(rng, size))
