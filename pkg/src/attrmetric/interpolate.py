"""Noise attributes and the meaningful-to-noise interpolation curve.

The holdout set ``S2`` is progressively diluted with uniformly random
attributes and its distance to the representation set ``S1`` is recorded as a
function of the number of injected attributes.  The curve starts at
``delta(S2, S1)`` and rises towards the distance of pure noise to ``S1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import rng as _rng
from .core import AttributeMatrix, Kind, ShapeMismatchError, as_matrix, check_same_exemplars
from .reconstruct import ConvexHullSolver, delta_jp


@dataclass(frozen=True)
class NoiseSpec:
    n_exemplars: int
    count: int
    seed: int = 0

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("noise count must be nonnegative")
        if self.n_exemplars < 1:
            raise ValueError("need at least one exemplar")


def gen_noise(spec: NoiseSpec) -> AttributeMatrix:
    """``count`` columns of independent fair ±1 entries (PCG64 seeded by ``spec.seed``)."""
    g = _rng.generator(spec.seed)
    bits = g.integers(0, 2, size=(spec.n_exemplars, spec.count), dtype=np.int8)
    return AttributeMatrix(2 * bits - 1)


def _noise_values(n_exemplars: int, count: int, seed: int, n: int, t: int) -> np.ndarray:
    spec = NoiseSpec(n_exemplars, count, _rng.derive_seed(seed, _rng.NOISE, n, t))
    return gen_noise(spec).values


def default_grid(s2_size: int) -> list[int]:
    """``0, ceil(m/4), ceil(m/2), m, 2m, 4m, 8m, 16m`` for ``m = |S2|``, deduplicated."""
    m = int(s2_size)
    pts = [0, math.ceil(m / 4), math.ceil(m / 2), m, 2 * m, 4 * m, 8 * m, 16 * m]
    return sorted(set(pts))


@dataclass(frozen=True)
class InterpolationCurve:
    grid: np.ndarray
    mean_distance: np.ndarray
    std_distance: np.ndarray
    trials: int
    kind: Kind
    samples: Optional[np.ndarray] = None  # len(grid) x trials
    converged: bool = True

    def __post_init__(self):
        grid = np.asarray(self.grid)
        if grid.size == 0 or grid[0] != 0 or np.any(np.diff(grid) <= 0):
            raise ValueError("grid must start at 0 and be strictly increasing")

    def __len__(self) -> int:
        return len(self.grid)


def _check_grid(grid: Sequence[int]) -> np.ndarray:
    g = np.asarray(list(grid), dtype=np.int64)
    if g.size == 0 or g[0] != 0:
        raise ValueError("grid must start at 0")
    if np.any(np.diff(g) <= 0):
        raise ValueError("grid must be strictly increasing")
    return g


def trace_curve(
    s1,
    s2,
    grid: Optional[Sequence[int]] = None,
    trials: int = 100,
    kind=Kind.CVX,
    seed: int = 0,
    solver: Optional[ConvexHullSolver] = None,
) -> InterpolationCurve:
    """Average ``delta(S2 + noise, S1)`` over ``trials`` draws at each noise count.

    Noise for grid point ``n`` and trial ``t`` is drawn from its own substream
    of ``seed``, so any subset of the grid reproduces the same values.
    """
    kind = Kind.parse(kind)
    s1, s2 = as_matrix(s1), as_matrix(s2)
    N = check_same_exemplars(s1, s2)
    if s2.n_attributes < 1:
        raise ShapeMismatchError("the holdout set is empty")
    if trials < 1:
        raise ValueError("need at least one trial")
    g = _check_grid(default_grid(s2.n_attributes) if grid is None else grid)
    K2 = s2.n_attributes
    samples = np.empty((len(g), trials))
    converged = True

    if kind is Kind.CVX:
        if solver is None:
            solver = ConvexHullSolver(s1.values)
        base = solver.solve(s2.values)
        converged &= bool(np.all(base.residuals <= solver.tol))
        base_sum = float(np.sum(base.errors))
        for i, n in enumerate(g):
            if n == 0:
                samples[i] = base_sum / K2
                continue
            noise = np.hstack([_noise_values(N, int(n), seed, int(n), t) for t in range(trials)])
            sol = solver.solve(noise)
            converged &= bool(np.all(sol.residuals <= solver.tol))
            per_trial = sol.errors.reshape(trials, int(n)).sum(axis=1)
            samples[i] = (base_sum + per_trial) / (K2 + n)
    else:
        for i, n in enumerate(g):
            if n == 0:
                samples[i] = delta_jp(s1.values, s2.values).distance
                continue
            for t in range(trials):
                B = np.hstack([s2.values, _noise_values(N, int(n), seed, int(n), t)])
                samples[i, t] = delta_jp(s1.values, B).distance

    return InterpolationCurve(
        grid=g,
        mean_distance=samples.mean(axis=1),
        std_distance=samples.std(axis=1),
        trials=trials,
        kind=kind,
        samples=samples,
        converged=converged,
    )
