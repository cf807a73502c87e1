"""Seeded generators for the synthetic stress scenarios.

Four additive-noise kinds with ground truth x->y and two confounding-only
kinds driven by a latent factor (no true direction).  Each kind exposes one
stress parameter that the sweep grids vary while the rest stay at their
defaults.  Generation is a pure function of the scenario, with normals
drawn by inverse-CDF from a counter-based uniform stream.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .data import PairSample
from .errors import InvalidScenario
from .rng import generator, mix64, standard_normal, uniform_open01

TRUTH_X_TO_Y = "x->y"
TRUTH_NONE = "none"


class ScenarioKind(str, Enum):
    CUBIC = "cubic"
    NEAR_LINEAR = "near_linear"
    HETERO_CUBIC = "hetero_cubic"
    SINE = "sine"
    CONFOUND_LINEAR = "confound_linear"
    CONFOUND_NONLINEAR = "confound_nonlinear"


# per-kind defaults; the swept stress parameter is listed in SWEEP_PARAM
DEFAULT_PARAMS = {
    ScenarioKind.CUBIC: {"sigma_eps": 0.3},
    ScenarioKind.NEAR_LINEAR: {"c": 0.2, "sigma_eps": 0.3},
    ScenarioKind.HETERO_CUBIC: {"lam": 1.0, "sigma0": 0.3},
    ScenarioKind.SINE: {"sigma_eps": 0.3},
    ScenarioKind.CONFOUND_LINEAR: {"gamma": 1.0, "sigma_x": 0.5, "sigma_y": 0.5},
    ScenarioKind.CONFOUND_NONLINEAR: {"a": 0.3, "b": 1.0, "sigma_x": 0.5, "sigma_y": 0.5},
}

SWEEP_PARAM = {
    ScenarioKind.CUBIC: "sigma_eps",
    ScenarioKind.NEAR_LINEAR: "c",
    ScenarioKind.HETERO_CUBIC: "lam",
    ScenarioKind.SINE: "sigma_eps",
    ScenarioKind.CONFOUND_LINEAR: "gamma",
    ScenarioKind.CONFOUND_NONLINEAR: "a",
}

SWEEP_DEFAULT_GRID = {
    ScenarioKind.CUBIC: (0.02, 0.1, 0.3, 1.0),
    ScenarioKind.NEAR_LINEAR: (0.0, 0.05, 0.2, 1.0),
    ScenarioKind.HETERO_CUBIC: (0.0, 0.5, 1.0, 2.0),
    ScenarioKind.SINE: (0.02, 0.1, 0.3, 1.0),
    ScenarioKind.CONFOUND_LINEAR: (0.25, 0.5, 1.0, 2.0),
    ScenarioKind.CONFOUND_NONLINEAR: (0.0, 0.1, 0.3, 1.0),
}

_SCALE_PARAMS = ("sigma_eps", "sigma0", "lam", "sigma_x", "sigma_y")


@dataclass
class Scenario:
    kind: ScenarioKind
    n: int
    seed: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        try:
            self.kind = ScenarioKind(self.kind)
        except ValueError:
            raise InvalidScenario(f"unknown scenario kind {self.kind!r}") from None
        if self.n < 1:
            raise InvalidScenario("scenario needs n >= 1")
        merged = dict(DEFAULT_PARAMS[self.kind])
        merged.update({k: float(v) for k, v in self.params.items()})
        for key in _SCALE_PARAMS:
            if key in merged and merged[key] < 0:
                raise InvalidScenario(f"scale parameter {key} must be >= 0")
        self.params = merged

    @property
    def truth(self) -> str:
        if self.kind in (ScenarioKind.CONFOUND_LINEAR, ScenarioKind.CONFOUND_NONLINEAR):
            return TRUTH_NONE
        return TRUTH_X_TO_Y

    @property
    def sweep_value(self) -> float:
        return self.params[SWEEP_PARAM[self.kind]]

    def to_record(self) -> dict:
        rec = {"kind": self.kind.value, "n": self.n, "seed": self.seed, "truth": self.truth}
        rec.update({f"param_{k}": v for k, v in sorted(self.params.items())})
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "Scenario":
        params = {k[6:]: float(v) for k, v in rec.items() if k.startswith("param_")}
        return cls(kind=rec["kind"], n=int(rec["n"]), seed=int(rec["seed"]), params=params)


def generate(scenario: Scenario) -> PairSample:
    """Draw one sample from the scenario's law (pure function of the scenario)."""
    rng = generator(scenario.seed)
    n = scenario.n
    p = scenario.params
    kind = scenario.kind
    if kind == ScenarioKind.CUBIC:
        x = standard_normal(rng, n)
        y = x**3 + p["sigma_eps"] * standard_normal(rng, n)
    elif kind == ScenarioKind.NEAR_LINEAR:
        x = standard_normal(rng, n)
        y = x + p["c"] * x**3 + p["sigma_eps"] * standard_normal(rng, n)
    elif kind == ScenarioKind.HETERO_CUBIC:
        x = standard_normal(rng, n)
        y = x**3 + (p["sigma0"] + p["lam"] * np.abs(x)) * standard_normal(rng, n)
    elif kind == ScenarioKind.SINE:
        x = 2.0 * uniform_open01(rng, n) - 1.0
        y = np.sin(x) + p["sigma_eps"] * standard_normal(rng, n)
    elif kind == ScenarioKind.CONFOUND_LINEAR:
        z = standard_normal(rng, n)
        x = z + p["sigma_x"] * standard_normal(rng, n)
        y = p["gamma"] * z + p["sigma_y"] * standard_normal(rng, n)
    elif kind == ScenarioKind.CONFOUND_NONLINEAR:
        z = standard_normal(rng, n)
        x = z + p["a"] * z**3 + p["sigma_x"] * standard_normal(rng, n)
        y = p["b"] * z + p["a"] * z**3 + p["sigma_y"] * standard_normal(rng, n)
    else:  # pragma: no cover - enum is exhaustive
        raise InvalidScenario(f"unknown scenario kind {kind!r}")
    meta = {"scenario": kind.value, "seed": scenario.seed, "truth": scenario.truth}
    meta.update(p)
    return PairSample(x, y, meta)


def sweep_grid(kind, n_grid, param_grid, n_rep: int, base_seed: int) -> list[Scenario]:
    """Cartesian (n, stress value, replicate) grid with derived seeds.

    The seed of cell (n, value index ip, rep) is
    mix64(base_seed, kind index, n, ip, rep); ordering is n-major.
    ``param_grid=None`` selects the kind's default stress grid.
    """
    kind = ScenarioKind(kind)
    n_grid = list(n_grid)
    param_grid = list(SWEEP_DEFAULT_GRID[kind] if param_grid is None else param_grid)
    if not n_grid or not param_grid or n_rep < 1:
        raise InvalidScenario("sweep grids must be nonempty")
    kind_idx = list(ScenarioKind).index(kind)
    name = SWEEP_PARAM[kind]
    out = []
    for n in n_grid:
        for ip, value in enumerate(param_grid):
            for rep in range(n_rep):
                seed = mix64(base_seed, kind_idx, n, ip, rep)
                out.append(Scenario(kind=kind, n=int(n), seed=seed, params={name: float(value)}))
    return out
