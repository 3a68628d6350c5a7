"""Choosing the representation set S1 from a labelled attribute set.

Attributes that are hard to reconstruct from the others (leave-one-out error
above ``alpha``) and attributes named explicitly as independent always go to
S1; the remainder is filled uniformly at random.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import rng as _rng
from .core import (
    AttributeMatrix,
    ForcedSetTooLargeError,
    Kind,
    SubspaceSplit,
    TooFewAttributesError,
    UnknownForcedNameError,
    as_matrix,
)
from .reconstruct import ConvexHullSolver, delta_jp

DEFAULT_ALPHA = 18.89


@dataclass(frozen=True)
class IndependenceScores:
    scores: np.ndarray
    kind: Kind

    def __len__(self) -> int:
        return len(self.scores)


def leave_one_out_errors(S, kind=Kind.CVX) -> IndependenceScores:
    """Reconstruction error of every column of ``S`` from all the others."""
    S = as_matrix(S)
    kind = Kind.parse(kind)
    M = S.n_attributes
    if M < 2:
        raise TooFewAttributesError("leave-one-out needs at least two attributes")
    X = S.values.astype(np.float64)
    scores = np.empty(M)
    for j in range(M):
        rest = np.delete(X, j, axis=1)
        z = X[:, j : j + 1]
        if kind is Kind.CVX:
            scores[j] = ConvexHullSolver(rest).solve(z).errors[0]
        else:
            scores[j] = delta_jp(rest, z).distance
    return IndependenceScores(scores, kind)


def alpha_from_percentile(scores, percentile: float) -> float:
    """Threshold such that roughly the top ``100 - percentile`` % of scores exceed it."""
    s = np.asarray(getattr(scores, "scores", scores), dtype=np.float64)
    return float(np.percentile(s, percentile))


@dataclass(frozen=True)
class SelectionConfig:
    alpha: float = DEFAULT_ALPHA
    alpha_percentile: Optional[float] = None  # overrides alpha when set
    forced_names: tuple[str, ...] = field(default_factory=tuple)
    s1_fraction: float = 0.5
    seed: int = 0
    kind: Kind = Kind.CVX

    def __post_init__(self):
        if not 0.0 < self.s1_fraction < 1.0:
            raise ValueError("s1_fraction must lie strictly between 0 and 1")
        if self.alpha < 0:
            raise ValueError("alpha must be nonnegative")
        if self.alpha_percentile is not None and not 0.0 <= self.alpha_percentile <= 100.0:
            raise ValueError("alpha_percentile must lie in [0, 100]")
        object.__setattr__(self, "forced_names", tuple(self.forced_names))
        object.__setattr__(self, "kind", Kind.parse(self.kind))

    def resolve_alpha(self, scores) -> float:
        if self.alpha_percentile is None:
            return self.alpha
        return alpha_from_percentile(scores, self.alpha_percentile)


def s1_capacity(n_attributes: int, s1_fraction: float) -> int:
    # guard against 2/3 * 24 = 16.000000000000004
    return math.ceil(round(s1_fraction * n_attributes, 9))


def forced_indices(S: AttributeMatrix, cfg: SelectionConfig, scores) -> list[int]:
    names = S.column_names()
    lookup = {n: i for i, n in enumerate(names)}
    forced = set()
    for name in cfg.forced_names:
        if name not in lookup:
            raise UnknownForcedNameError(f"forced attribute {name!r} is not in the labelled set")
        forced.add(lookup[name])
    alpha = cfg.resolve_alpha(scores)
    s = np.asarray(getattr(scores, "scores", scores), dtype=np.float64)
    forced.update(int(j) for j in np.flatnonzero(s > alpha))
    return sorted(forced)


def select_representation(
    S, cfg: SelectionConfig, scores: Optional[Sequence[float]] = None
) -> SubspaceSplit:
    """Split ``S`` into ``(S1, S2)`` with every forced attribute in S1.

    ``scores`` are the leave-one-out errors; computed with ``cfg.kind`` when
    not given.
    """
    S = as_matrix(S)
    M = S.n_attributes
    cap = s1_capacity(M, cfg.s1_fraction)
    if M < 2 or cap >= M:
        raise TooFewAttributesError(f"cannot split {M} attributes with fraction {cfg.s1_fraction}")
    if scores is None:
        scores = leave_one_out_errors(S, cfg.kind)
    s = np.asarray(getattr(scores, "scores", scores), dtype=np.float64)
    if len(s) != M:
        raise ValueError(f"{len(s)} scores given for {M} attributes")

    forced = forced_indices(S, cfg, s)
    if len(forced) > cap:
        raise ForcedSetTooLargeError(
            f"{len(forced)} attributes must go to S1 but it only holds {cap}"
        )
    pool = np.array([j for j in range(M) if j not in set(forced)], dtype=np.int64)
    g = _rng.generator(cfg.seed, _rng.FILL)
    fill = g.choice(pool, size=cap - len(forced), replace=False) if cap > len(forced) else []
    s1_idx = tuple(sorted(forced + [int(j) for j in fill]))
    s2_idx = tuple(j for j in range(M) if j not in set(s1_idx))
    return SubspaceSplit(
        s1=S.take(s1_idx),
        s2=S.take(s2_idx),
        s1_indices=s1_idx,
        s2_indices=s2_idx,
        forced_indices=frozenset(forced),
        seed=cfg.seed,
    )
