"""Synthetic attribute sets with planted meaningful structure."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import rng as _rng
from .core import AttributeMatrix, as_matrix
from .interpolate import NoiseSpec, gen_noise


@dataclass(frozen=True)
class PlantSpec:
    base: AttributeMatrix
    n_meaningful: int
    n_noise: int = 0
    flip_rate: float = 0.0
    combine_width: int = 1
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "base", as_matrix(self.base))
        if not 0.0 <= self.flip_rate < 0.5:
            raise ValueError("flip_rate must lie in [0, 0.5)")
        if self.combine_width < 1:
            raise ValueError("combine_width must be at least 1")
        if self.combine_width > self.base.n_attributes:
            raise ValueError("combine_width exceeds the number of base attributes")
        if self.n_meaningful < 0 or self.n_noise < 0:
            raise ValueError("attribute counts must be nonnegative")


class Planted(NamedTuple):
    matrix: AttributeMatrix
    meaningful: np.ndarray  # bool per column
    sources: tuple[tuple[int, ...], ...]  # base columns mixed into each planted column


def plant_meaningful(spec: PlantSpec) -> Planted:
    """Planted columns first, then pure-noise columns.

    A planted column is ``sign(sum_i w_i * base[:, c_i])`` over
    ``combine_width`` distinct base columns with Dirichlet(1) weights (zero
    sums become +1), after which every entry flips with ``flip_rate``.
    """
    base = spec.base.values.astype(np.float64)
    N, J = base.shape
    if J == 0:
        raise ValueError("the base set is empty")
    g = _rng.generator(spec.seed, _rng.PLANT)
    cols, sources = [], []
    for _ in range(spec.n_meaningful):
        pick = np.sort(g.choice(J, size=spec.combine_width, replace=False))
        w = g.dirichlet(np.ones(spec.combine_width))
        mixed = np.where(base[:, pick] @ w >= 0, 1, -1).astype(np.int8)
        flips = g.random(N) < spec.flip_rate
        mixed[flips] *= -1
        cols.append(mixed)
        sources.append(tuple(int(p) for p in pick))
    planted = np.column_stack(cols) if cols else np.zeros((N, 0), dtype=np.int8)
    noise = gen_noise(NoiseSpec(N, spec.n_noise, _rng.derive_seed(spec.seed, _rng.NOISE)))
    values = np.hstack([planted, noise.values])
    names = [f"planted{i}" for i in range(spec.n_meaningful)]
    names += [f"noise{i}" for i in range(spec.n_noise)]
    truth = np.array([True] * spec.n_meaningful + [False] * spec.n_noise, dtype=bool)
    return Planted(AttributeMatrix(values, tuple(names)), truth, tuple(sources))


def synthetic_labelled_set(
    n_exemplars: int = 200,
    n_latent: int = 8,
    n_attributes: int = 24,
    flip_rate: float = 0.1,
    combine_width: int = 2,
    seed: int = 0,
) -> tuple[AttributeMatrix, AttributeMatrix]:
    """A stand-in for a human-labelled attribute set.

    ``n_latent`` random latent attributes are drawn, and ``n_attributes``
    labelled attributes are planted from them.  Returns ``(labelled, latent)``.
    """
    latent = gen_noise(NoiseSpec(n_exemplars, n_latent, _rng.derive_seed(seed, _rng.PLANT, 0)))
    latent = AttributeMatrix(latent.values, tuple(f"latent{i}" for i in range(n_latent)))
    planted = plant_meaningful(
        PlantSpec(
            base=latent,
            n_meaningful=n_attributes,
            flip_rate=flip_rate,
            combine_width=combine_width,
            seed=_rng.derive_seed(seed, _rng.PLANT, 1),
        )
    )
    names = tuple(f"s{i}" for i in range(n_attributes))
    return AttributeMatrix(planted.matrix.values, names), latent
