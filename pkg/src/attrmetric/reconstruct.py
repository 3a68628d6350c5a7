"""Reconstruction distances between a discovered attribute set and a meaningful one.

Two regularizations are provided:

* convex hull -- every discovered column is approximated by a convex
  combination of the meaningful columns (``delta_cvx``);
* joint l0 -- discovered and meaningful columns are paired one-to-one by a
  greedy highest-agreement rule and each discovered column is reconstructed by
  its partner alone (``delta_jp``).  Unpaired discovered columns are
  reconstructed by the zero vector and therefore cost ``N`` each.

Both distances are the average squared reconstruction error per discovered
column.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .core import (
    AttributeMatrix,
    AttributeVector,
    EmptyVectorError,
    Kind,
    ShapeMismatchError,
)

KKT_TOL = 1e-9
MAX_ITER = 10_000


def _float_matrix(x) -> np.ndarray:
    if isinstance(x, AttributeMatrix):
        return x.values.astype(np.float64)
    if isinstance(x, AttributeVector):
        return x.values.astype(np.float64).reshape(-1, 1)
    arr = np.asarray(x, dtype=np.float64)
    return arr.reshape(-1, 1) if arr.ndim == 1 else arr


def _check_pair(A: np.ndarray, B: np.ndarray) -> None:
    if A.shape[0] != B.shape[0]:
        raise ShapeMismatchError(
            f"meaningful set has {A.shape[0]} exemplars, discovered set has {B.shape[0]}"
        )
    if A.shape[1] < 1:
        raise ShapeMismatchError("the meaningful set has no attributes")
    if B.shape[1] < 1:
        raise ShapeMismatchError("the discovered set has no attributes")


def simplex_project(v) -> np.ndarray:
    """Euclidean projection onto the probability simplex.

    ``v`` may be a vector or a ``J x K`` array, in which case every column is
    projected independently.  Uses the sort-and-threshold rule (Held et al.,
    Duchi et al.); O(J log J) per column.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.size == 0 or v.shape[0] == 0:
        raise EmptyVectorError("cannot project an empty vector onto the simplex")
    if v.ndim == 1:
        return simplex_project(v[:, None])[:, 0]
    J = v.shape[0]
    u = -np.sort(-v, axis=0)
    css = np.cumsum(u, axis=0) - 1.0
    ind = np.arange(1, J + 1, dtype=np.float64)[:, None]
    # last index where u_i > (css_i / i); always true at i = 1
    cond = u - css / ind > 0
    rho = J - 1 - np.argmax(cond[::-1], axis=0)
    theta = css[rho, np.arange(v.shape[1])] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


class HullSolution(NamedTuple):
    coefficients: np.ndarray  # J x K
    errors: np.ndarray  # K
    residuals: np.ndarray  # K, projected-gradient norm at the returned point
    iterations: np.ndarray  # K


class ConvexHullSolver:
    """Solve ``min_r ||A r - z||^2`` over the simplex for many ``z`` at once.

    Accelerated projected gradient (FISTA with adaptive restart) on the
    quadratic form ``r'Gr - 2c'r`` with ``G = A'A``.  The step is ``1/L`` with
    ``L = 2 * lambda_max(G)``.  A column stops when the norm of its gradient
    mapping ``L * (r - P(r - grad/L))`` is at most ``tol``; columns are frozen
    independently, so batching does not change any column's iterates.

    Every ``polish_every`` iterations the stationary point of the objective on
    each column's current support is tried; it is kept only if it is feasible
    and passes the same gradient-mapping test.
    """

    def __init__(self, A, tol: float = KKT_TOL, max_iter: int = MAX_ITER, polish_every: int = 5, polish_gate: float = 1e-2):
        self.A = _float_matrix(A)
        if self.A.shape[1] < 1:
            raise ShapeMismatchError("the meaningful set has no attributes")
        self.G = self.A.T @ self.A
        self.L = 2.0 * float(np.linalg.eigvalsh(self.G)[-1])
        self.tol = tol
        self.max_iter = max_iter
        self.polish_every = polish_every
        self.polish_gate = polish_gate

    def _polish(self, R, C):
        """Stationary point of the objective restricted to each column's support.

        Columns whose candidate is infeasible get NaN; the caller accepts a
        candidate only if its gradient mapping passes the tolerance.
        """
        J, K = R.shape
        m = (R > 0).T.astype(np.float64)  # K x J
        M = np.zeros((K, J + 1, J + 1))
        M[:, :J, :J] = self.G[None] * m[:, :, None] * m[:, None, :]
        M[:, np.arange(J), np.arange(J)] += 1.0 - m
        M[:, :J, J] = m
        M[:, J, :J] = m
        rhs = np.concatenate([C.T * m, np.ones((K, 1))], axis=1)
        try:
            sol = np.linalg.solve(M, rhs[..., None])[..., 0]
        except np.linalg.LinAlgError:
            return None
        cand = sol[:, :J].T * m.T
        bad = np.any(cand < 0, axis=0) | ~np.all(np.isfinite(cand), axis=0)
        cand[:, bad] = np.nan
        return cand

    def _mapping(self, R, grad):
        return self.L * np.linalg.norm(R - simplex_project(R - grad / self.L), axis=0)

    def solve(self, B) -> HullSolution:
        B = _float_matrix(B)
        _check_pair(self.A, B)
        J, K = self.A.shape[1], B.shape[1]
        C = self.A.T @ B
        L, G = self.L, self.G

        out_R = np.empty((J, K))
        out_res = np.empty(K)
        out_it = np.zeros(K, dtype=np.int64)

        active = np.arange(K)
        Ca = C
        R = np.full((J, K), 1.0 / J)
        grad_R = 2.0 * (G @ R - Ca)
        Y, grad_Y = R.copy(), grad_R.copy()
        t = np.ones(K)
        res = self._mapping(R, grad_R)

        for it in range(self.max_iter + 1):
            done = res <= self.tol
            if it == self.max_iter:
                done[:] = True
            if done.any():
                idx = active[done]
                out_R[:, idx] = R[:, done]
                out_res[idx] = res[done]
                out_it[idx] = it
                keep = ~done
                active = active[keep]
                if active.size == 0:
                    break
                R, grad_R, Y, grad_Y = R[:, keep], grad_R[:, keep], Y[:, keep], grad_Y[:, keep]
                t, Ca, res = t[keep], Ca[:, keep], res[keep]

            if it % self.polish_every == self.polish_every - 1:
                near = np.flatnonzero(res <= self.polish_gate * L)
                cand = self._polish(R[:, near], Ca[:, near]) if near.size else None
                if cand is not None:
                    grad_c = 2.0 * (G @ cand - Ca[:, near])
                    res_c = self._mapping(cand, grad_c)
                    ok = res_c <= self.tol
                    if ok.any():
                        sel = near[ok]
                        R[:, sel], grad_R[:, sel], res[sel] = cand[:, ok], grad_c[:, ok], res_c[ok]
                        continue

            R_new = simplex_project(Y - grad_Y / L)
            grad_new = 2.0 * (G @ R_new - Ca)
            step = R_new - R
            # restart momentum where it points uphill
            restart = np.einsum("ij,ij->j", Y - R_new, step) > 0
            t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
            beta = np.where(restart, 0.0, (t - 1.0) / t_new)
            t = np.where(restart, 1.0, t_new)
            Y = R_new + beta * step
            grad_Y = (1.0 + beta) * grad_new - beta * grad_R
            R, grad_R = R_new, grad_new
            res = self._mapping(R, grad_R)

        errors = np.sum((self.A @ out_R - B) ** 2, axis=0)
        return HullSolution(out_R, errors, out_res, out_it)


@dataclass(frozen=True)
class ReconstructionResult:
    distance: float
    coefficients: np.ndarray
    kind: Kind
    per_column_errors: np.ndarray
    converged: bool = True
    kkt_residuals: Optional[np.ndarray] = None
    iterations: int = 0
    matches: Optional["MatchSet"] = field(default=None, repr=False)


def delta_cvx(A, B, solver: Optional[ConvexHullSolver] = None) -> ReconstructionResult:
    """Average squared distance of ``B``'s columns to the convex hull of ``A``'s.

    Pass a prebuilt ``solver`` to reuse its factorisation of ``A``.
    """
    Bf = _float_matrix(B)
    if solver is None:
        solver = ConvexHullSolver(A)
    sol = solver.solve(Bf)
    converged = bool(np.all(sol.residuals <= solver.tol))
    return ReconstructionResult(
        distance=float(np.mean(sol.errors)),
        coefficients=sol.coefficients,
        kind=Kind.CVX,
        per_column_errors=sol.errors,
        converged=converged,
        kkt_residuals=sol.residuals,
        iterations=int(sol.iterations.max()),
    )


def correlation(z, h) -> float:
    """Fraction of exemplars on which two attributes agree."""
    z = np.asarray(getattr(z, "values", z)).ravel()
    h = np.asarray(getattr(h, "values", h)).ravel()
    if z.shape != h.shape:
        raise ShapeMismatchError(f"attribute lengths differ: {z.size} vs {h.size}")
    return float(np.count_nonzero(z == h)) / z.size


@dataclass(frozen=True)
class MatchSet:
    """Greedily selected (meaningful j, discovered k, agreement) triples, in order."""

    pairs: tuple[tuple[int, int, float], ...]

    @property
    def size(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


def agreement_counts(A, B) -> np.ndarray:
    """``J x K`` integer table of positions where ``A[:, j] == B[:, k]``."""
    Af, Bf = _float_matrix(A), _float_matrix(B)
    _check_pair(Af, Bf)
    N = Af.shape[0]
    dots = np.rint(Af.T @ Bf).astype(np.int64)
    return (N + dots) // 2


def greedy_match(A, B) -> MatchSet:
    """Pick ``min(J, K)`` disjoint pairs, highest agreement first.

    Ties go to the lexicographically smallest ``(j, k)``.
    """
    counts = agreement_counts(A, B)
    N = np.shape(_float_matrix(A))[0]
    J, K = counts.shape
    table = counts.copy()
    pairs = []
    for _ in range(min(J, K)):
        flat = int(np.argmax(table))  # row-major: first max is the smallest (j, k)
        j, k = divmod(flat, K)
        pairs.append((j, k, counts[j, k] / N))
        table[j, :] = -1
        table[:, k] = -1
    return MatchSet(tuple(pairs))


def delta_jp(A, B) -> ReconstructionResult:
    """Average squared error when each discovered column is reconstructed by its greedy partner."""
    Af, Bf = _float_matrix(A), _float_matrix(B)
    matches = greedy_match(Af, Bf)
    J, K = Af.shape[1], Bf.shape[1]
    R = np.zeros((J, K))
    for j, k, _ in matches:
        R[j, k] = 1.0
    errors = np.sum((Af @ R - Bf) ** 2, axis=0)
    return ReconstructionResult(
        distance=float(np.mean(errors)),
        coefficients=R,
        kind=Kind.JP,
        per_column_errors=errors,
        matches=matches,
    )


def delta(A, B, kind, solver: Optional[ConvexHullSolver] = None) -> ReconstructionResult:
    kind = Kind.parse(kind)
    if kind is Kind.CVX:
        return delta_cvx(A, B, solver=solver)
    return delta_jp(A, B)


def attribute_distance(z, A, kind=Kind.CVX) -> float:
    """Squared reconstruction error of a single attribute ``z`` from ``A``."""
    zf = _float_matrix(z)
    if zf.shape[1] != 1:
        raise ShapeMismatchError("attribute_distance takes a single attribute")
    return delta(A, zf, kind).distance
