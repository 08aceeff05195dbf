"""Test-problem generators: upwind advection stencils in 1D/2D, a 1D
Laplacian, advection-diffusion, and random nonsymmetric matrices whose
symmetric part is SPD by construction. Plus default CF splittings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, asdict

import numpy as np

from .linalg import CFPartition

__all__ = ["ProblemSpec", "generate", "default_splitting", "PROBLEM_KINDS"]

PROBLEM_KINDS = ("advection1d", "advection2d", "advdiff1d", "laplacian1d", "random")

_KIND_ALIASES = {
    "advection1d": "advection1d",
    "advection2d": "advection2d",
    "advdiff1d": "advdiff1d",
    "advectiondiffusion1d": "advdiff1d",
    "laplacian1d": "laplacian1d",
    "random": "random",
    "randomstablenonsym": "random",
}


@dataclass(frozen=True)
class ProblemSpec:
    """Recipe for one test matrix.

    n sizes the 1D kinds; nx/ny size the 2D grid; epsilon is the diffusion
    coefficient for advdiff1d; seed drives the random kind.
    """

    kind: str
    n: int | None = None
    nx: int | None = None
    ny: int | None = None
    epsilon: float = 0.0
    seed: int = 0

    def __post_init__(self):
        key = str(self.kind).replace("-", "").replace("_", "").lower()
        if key not in _KIND_ALIASES:
            raise ValueError(f"unknown problem kind {self.kind!r}; expected one of {PROBLEM_KINDS}")
        object.__setattr__(self, "kind", _KIND_ALIASES[key])
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")

    @classmethod
    def from_dict(cls, d):
        known = {"kind", "n", "nx", "ny", "epsilon", "seed"}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown problem fields: {sorted(extra)}")
        if "kind" not in d:
            raise ValueError("problem spec needs a 'kind' field")
        return cls(**d)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_dict(self):
        return asdict(self)


def _advection1d(n):
    # First-order upwind with inflow folded into row 0: unit diagonal, -1 subdiagonal.
    return np.eye(n) - np.eye(n, k=-1)


def _laplacian1d(n):
    return 2.0 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)


def generate(spec):
    """Build the dense test matrix described by a ProblemSpec."""
    kind = spec.kind
    if kind in ("advection1d", "advdiff1d", "laplacian1d"):
        n = spec.n
        if n is None or n < 2:
            raise ValueError(f"{kind} needs n >= 2, got {n}")
        if kind == "advection1d":
            return _advection1d(n)
        if kind == "laplacian1d":
            return _laplacian1d(n)
        h = 1.0 / (n + 1)
        return _advection1d(n) + (spec.epsilon / h**2) * _laplacian1d(n)
    if kind == "advection2d":
        nx, ny = spec.nx, spec.ny
        if nx is None or ny is None or nx < 2 or ny < 2:
            raise ValueError(f"advection2d needs nx, ny >= 2, got nx={nx} ny={ny}")
        # Dimension-by-dimension upwind, lexicographic ordering (x fastest).
        return np.kron(np.eye(ny), _advection1d(nx)) + np.kron(_advection1d(ny), np.eye(nx))
    if kind == "random":
        n = spec.n
        if n is None or n < 2:
            raise ValueError(f"random needs n >= 2, got {n}")
        rng = np.random.default_rng(spec.seed)
        G = rng.standard_normal((n, n))
        S = G @ G.T / n + 0.1 * np.eye(n)    # SPD, smallest eigenvalue >= 0.1
        K0 = rng.standard_normal((n, n))
        K = (K0 - K0.T) / 2.0
        # S SPD keeps x*(S + K)x > 0 for every x != 0, so A stays nonsingular.
        return S + K
    raise AssertionError(f"unhandled kind {kind!r}")


def default_splitting(n, policy="alternate", seed=0, cfrac=0.5):
    """Standard CF splittings: even/odd, first-half-F, or seeded random."""
    if n < 2:
        raise ValueError("need n >= 2 to split")
    key = str(policy).replace("-", "").replace("_", "").lower()
    if key == "alternate":
        f = tuple(range(0, n, 2))
        c = tuple(range(1, n, 2))
    elif key in ("firsthalf", "firsthalff"):
        k = (n + 1) // 2
        f = tuple(range(k))
        c = tuple(range(k, n))
    elif key == "random":
        if not 0.0 < cfrac < 1.0:
            raise ValueError("cfrac must lie strictly between 0 and 1")
        rng = np.random.default_rng(seed)
        is_c = rng.random(n) < cfrac
        if is_c.all():
            is_c[0] = False
        if not is_c.any():
            is_c[-1] = True
        f = tuple(int(i) for i in np.flatnonzero(~is_c))
        c = tuple(int(i) for i in np.flatnonzero(is_c))
    else:
        raise ValueError(f"unknown splitting policy {policy!r}")
    return CFPartition(n, f, c)
