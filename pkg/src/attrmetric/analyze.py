"""Co-occurrence matrices and the full meaningfulness evaluation.

:func:`evaluate_methods` runs the repeated-split protocol: for every split of
the labelled set it measures each discovered set's distance to ``S1`` and
traces the noise-interpolation curves on ``(S1, S2)``.  Distances and curves
are averaged over splits before calibration; per-split scores are kept for
dispersion reporting.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from . import rng as _rng
from .calibrate import CalibrationResult, Clamp, calibrate, gamma_combined
from .core import AttributeMatrix, Kind, as_matrix, check_same_exemplars
from .interpolate import default_grid, trace_curve
from .reconstruct import ConvexHullSolver, delta_cvx, delta_jp
from .select import (
    DEFAULT_ALPHA,
    SelectionConfig,
    leave_one_out_errors,
    s1_capacity,
    select_representation,
)

KINDS = (Kind.CVX, Kind.JP)
THREADS_ENV = "ATTRMETRIC_THREADS"


@dataclass(frozen=True)
class CooccurrenceMatrix:
    values: np.ndarray
    labels: tuple[str, ...]  # one per block
    boundaries: tuple[int, ...]  # block start offsets, plus the total size
    names: tuple[str, ...] = ()


def cooccurrence(a, b, *more, labels: Optional[Sequence[str]] = None) -> CooccurrenceMatrix:
    """Joint probability that two attributes are both positive, over ``[a | b | ...]``."""
    blocks = [as_matrix(m) for m in (a, b) + more]
    N = check_same_exemplars(*blocks)
    X = np.hstack([m.values for m in blocks])
    pos = (X == 1).astype(np.int64)
    P = (pos.T @ pos) / N
    if labels is None:
        labels = [f"set{i}" for i in range(len(blocks))]
    if len(labels) != len(blocks):
        raise ValueError("one label per block is required")
    bounds = np.cumsum([0] + [m.n_attributes for m in blocks])
    names = tuple(
        f"{lab}:{n}" for lab, m in zip(labels, blocks) for n in m.column_names()
    )
    return CooccurrenceMatrix(P, tuple(labels), tuple(int(x) for x in bounds), names)


@dataclass(frozen=True)
class EvaluationConfig:
    splits: int = 100
    trials: int = 100
    grid: Optional[tuple[int, ...]] = None
    seed: int = 0
    alpha: float = DEFAULT_ALPHA
    alpha_percentile: Optional[float] = None
    forced_names: tuple[str, ...] = ()
    s1_fraction: float = 0.5
    selection_kind: Kind = Kind.CVX
    max_grid_extensions: int = 2
    cvx_weight: float = 0.5
    threads: Optional[int] = None

    def __post_init__(self):
        if self.splits < 1 or self.trials < 1:
            raise ValueError("splits and trials must be positive")
        if self.grid is not None:
            object.__setattr__(self, "grid", tuple(int(g) for g in self.grid))
        object.__setattr__(self, "forced_names", tuple(self.forced_names))
        object.__setattr__(self, "selection_kind", Kind.parse(self.selection_kind))

    def selection(self, seed: int) -> SelectionConfig:
        return SelectionConfig(
            alpha=self.alpha,
            alpha_percentile=self.alpha_percentile,
            forced_names=self.forced_names,
            s1_fraction=self.s1_fraction,
            seed=seed,
            kind=self.selection_kind,
        )

    def to_dict(self) -> dict:
        return {
            "splits": self.splits,
            "trials": self.trials,
            "grid": None if self.grid is None else list(self.grid),
            "seed": self.seed,
            "alpha": self.alpha,
            "alpha_percentile": self.alpha_percentile,
            "forced_names": list(self.forced_names),
            "s1_fraction": self.s1_fraction,
            "selection_kind": self.selection_kind.value,
            "max_grid_extensions": self.max_grid_extensions,
            "cvx_weight": self.cvx_weight,
        }


@dataclass(frozen=True)
class KindSummary:
    """Everything reported for one distance kind."""

    calibration: CalibrationResult
    delta_mean: float
    delta_std: float
    split_deltas: np.ndarray
    split_gammas: np.ndarray
    split_clamps: tuple[Clamp, ...]
    grid: np.ndarray
    curve_mean: np.ndarray  # averaged over splits
    curve_split_std: np.ndarray  # spread of per-split curve means
    curve_trial_std: np.ndarray  # within-split trial spread, averaged


@dataclass(frozen=True)
class MeaningfulnessReport:
    method: str
    kinds: dict
    gamma_tilde: float
    config: EvaluationConfig
    s2_size: int
    alpha_used: float
    split_seeds: tuple[int, ...]
    converged: bool = True
    per_split_gamma_tilde: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def gamma_cvx(self) -> float:
        return self.kinds[Kind.CVX].calibration.gamma

    @property
    def gamma_jp(self) -> float:
        return self.kinds[Kind.JP].calibration.gamma

    def to_dict(self) -> dict:
        out = {
            "method": self.method,
            "gamma_tilde": self.gamma_tilde,
            "s2_size": self.s2_size,
            "alpha_used": self.alpha_used,
            "converged": self.converged,
            "config": self.config.to_dict(),
            "split_seeds": list(self.split_seeds),
            "per_split_gamma_tilde": {
                "mean": float(np.mean(self.per_split_gamma_tilde)),
                "std": float(np.std(self.per_split_gamma_tilde)),
            },
        }
        for kind, s in self.kinds.items():
            out[kind.value] = {
                **s.calibration.to_dict(),
                "delta_mean": s.delta_mean,
                "delta_std": s.delta_std,
                "split_gamma_mean": float(np.mean(s.split_gammas)),
                "split_gamma_std": float(np.std(s.split_gammas)),
                "curve": {
                    "grid": [int(g) for g in s.grid],
                    "mean": [float(v) for v in s.curve_mean],
                    "fitted": [float(v) for v in s.calibration.fitted],
                    "split_std": [float(v) for v in s.curve_split_std],
                    "trial_std": [float(v) for v in s.curve_trial_std],
                },
            }
        return out


@dataclass
class _SplitWork:
    index: int
    seed: int
    s1: AttributeMatrix
    s2: AttributeMatrix
    solver: ConvexHullSolver
    curves: dict = field(default_factory=dict)  # kind -> (grid, mean, std)
    deltas: dict = field(default_factory=dict)  # (method, kind) -> float
    converged: bool = True


def _thread_count(cfg: EvaluationConfig) -> int:
    if cfg.threads is not None:
        return max(1, cfg.threads)
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _trace(work: _SplitWork, kind: Kind, grid, cfg: EvaluationConfig):
    curve = trace_curve(
        work.s1,
        work.s2,
        grid,
        cfg.trials,
        kind,
        seed=_rng.derive_seed(cfg.seed, _rng.CURVE, work.index),
        solver=work.solver,
    )
    work.converged &= curve.converged
    return curve


def _run_split(work: _SplitWork, methods: Mapping[str, AttributeMatrix], grid, cfg):
    for name, D in methods.items():
        r = delta_cvx(work.s1.values, D.values, solver=work.solver)
        work.converged &= r.converged
        work.deltas[name, Kind.CVX] = r.distance
        work.deltas[name, Kind.JP] = delta_jp(work.s1.values, D.values).distance
    for kind in KINDS:
        c = _trace(work, kind, grid, cfg)
        work.curves[kind] = (c.grid, c.mean_distance, c.std_distance)
    return work


def _extend(work: _SplitWork, kind: Kind, n_new: int, cfg):
    # the substream for (n, t) does not depend on the rest of the grid
    c = _trace(work, kind, [0, n_new], cfg)
    g, m, s = work.curves[kind]
    work.curves[kind] = (np.append(g, n_new), np.append(m, c.mean_distance[1]), np.append(s, c.std_distance[1]))
    return work


def _map(fn, items, threads):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def evaluate_methods(
    methods: Mapping[str, object], S, cfg: EvaluationConfig = EvaluationConfig()
) -> dict[str, MeaningfulnessReport]:
    """Meaningfulness reports for several discovered sets sharing one labelled set.

    The splits and interpolation curves depend only on ``S`` and ``cfg``, so
    they are computed once and shared by every method.
    """
    S = as_matrix(S)
    methods = {name: as_matrix(D) for name, D in methods.items()}
    check_same_exemplars(S, *methods.values())
    threads = _thread_count(cfg)

    scores = leave_one_out_errors(S, cfg.selection_kind)
    alpha_used = cfg.selection(0).resolve_alpha(scores)
    s2_size = S.n_attributes - s1_capacity(S.n_attributes, cfg.s1_fraction)
    grid = list(cfg.grid) if cfg.grid is not None else default_grid(s2_size)

    works = []
    for i in range(cfg.splits):
        seed_i = _rng.derive_seed(cfg.seed, _rng.SPLIT, i)
        sp = select_representation(S, cfg.selection(seed_i), scores=scores)
        works.append(_SplitWork(i, seed_i, sp.s1, sp.s2, ConvexHullSolver(sp.s1.values)))
    works = _map(lambda w: _run_split(w, methods, grid, cfg), works, threads)

    def aggregate(kind):
        grids = works[0].curves[kind][0]
        means = np.array([w.curves[kind][1] for w in works])
        stds = np.array([w.curves[kind][2] for w in works])
        return grids, means, stds

    # extend the grid while some method's averaged distance is beyond the curve
    for kind in KINDS:
        for _ in range(cfg.max_grid_extensions):
            g, means, _ = aggregate(kind)
            curve = (g, means.mean(axis=0))
            clamped = any(
                calibrate(curve, np.mean([w.deltas[name, kind] for w in works]), s2_size).clamp
                is Clamp.CEILING
                for name in methods
            )
            if not clamped:
                break
            n_new = int(2 * g[-1])
            works = _map(lambda w: _extend(w, kind, n_new, cfg), works, threads)

    converged = all(w.converged for w in works)
    reports = {}
    for name in methods:
        summaries = {}
        for kind in KINDS:
            g, means, stds = aggregate(kind)
            curve_mean = means.mean(axis=0)
            split_d = np.array([w.deltas[name, kind] for w in works])
            cal = calibrate((g, curve_mean), float(split_d.mean()), s2_size, kind)
            per_split = [calibrate((g, means[i]), split_d[i], s2_size, kind) for i in range(len(works))]
            summaries[kind] = KindSummary(
                calibration=cal,
                delta_mean=float(split_d.mean()),
                delta_std=float(split_d.std()),
                split_deltas=split_d,
                split_gammas=np.array([c.gamma for c in per_split]),
                split_clamps=tuple(c.clamp for c in per_split),
                grid=g,
                curve_mean=curve_mean,
                curve_split_std=means.std(axis=0),
                curve_trial_std=stds.mean(axis=0),
            )
        gt = gamma_combined(
            summaries[Kind.CVX].calibration.gamma, summaries[Kind.JP].calibration.gamma, cfg.cvx_weight
        )
        per_split_gt = np.array(
            [
                gamma_combined(a, b, cfg.cvx_weight)
                for a, b in zip(summaries[Kind.CVX].split_gammas, summaries[Kind.JP].split_gammas)
            ]
        )
        reports[name] = MeaningfulnessReport(
            method=name,
            kinds=summaries,
            gamma_tilde=gt,
            config=cfg,
            s2_size=s2_size,
            alpha_used=alpha_used,
            split_seeds=tuple(w.seed for w in works),
            converged=converged,
            per_split_gamma_tilde=per_split_gt,
        )
    return reports


def evaluate_method(D, S, cfg: EvaluationConfig = EvaluationConfig(), name: str = "discovered") -> MeaningfulnessReport:
    return evaluate_methods({name: D}, S, cfg)[name]
