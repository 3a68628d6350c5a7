"""Turn a distance into a 0-100 meaningfulness score.

The interpolation curve is first made monotone by isotonic least squares and
then inverted piecewise-linearly: ``g*`` is the (fractional) number of noise
attributes whose injection brings the holdout set to the observed distance.
The score is ``100 * (1 - g* / (|S2| + g*))``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import isotonic_regression

from .core import EmptyCurveError, Kind, OutOfRangeError
from .interpolate import InterpolationCurve


class Clamp(str, enum.Enum):
    NONE = "none"
    FLOOR = "floor"
    CEILING = "ceiling"


def isotonic_fit(values: Sequence[float]) -> np.ndarray:
    """Least-squares nondecreasing fit (pool adjacent violators)."""
    y = np.asarray(values, dtype=np.float64)
    if y.size <= 1:
        return y.copy()
    return np.asarray(isotonic_regression(y, increasing=True).x, dtype=np.float64)


class GStar(NamedTuple):
    g_star: float
    clamp: Clamp
    fitted: np.ndarray


def solve_gstar(curve, delta_d: float) -> GStar:
    """Smallest noise count at which the monotone fit of ``curve`` reaches ``delta_d``.

    ``curve`` is an :class:`InterpolationCurve` or a ``(grid, mean_distance)``
    pair.
    """
    if isinstance(curve, InterpolationCurve):
        grid, mean = curve.grid, curve.mean_distance
    else:
        grid, mean = curve
    x = np.asarray(grid, dtype=np.float64)
    y = np.asarray(mean, dtype=np.float64)
    if x.size == 0:
        raise EmptyCurveError("the interpolation curve has no points")
    if x[0] != 0:
        raise ValueError("the curve grid must start at 0")
    fit = isotonic_fit(y)
    d = float(delta_d)
    if d <= fit[0]:
        return GStar(0.0, Clamp.FLOOR, fit)
    if d >= fit[-1]:
        return GStar(float(x[-1]), Clamp.CEILING, fit)
    # first point at or above d; its predecessor is strictly below
    i = int(np.argmax(fit >= d))
    x0, x1, y0, y1 = x[i - 1], x[i], fit[i - 1], fit[i]
    g = x0 + (d - y0) / (y1 - y0) * (x1 - x0)
    return GStar(float(min(max(g, x0), x1)), Clamp.NONE, fit)


def gamma(g_star: float, s2_size: int) -> float:
    if g_star < 0:
        raise OutOfRangeError("g* must be nonnegative")
    if s2_size < 1:
        raise OutOfRangeError("the holdout set must be nonempty")
    return (1 - g_star / (s2_size + g_star)) * 100


def gamma_combined(gamma_cvx: float, gamma_jp: float, cvx_weight: float = 0.5) -> float:
    for name, v in (("gamma_cvx", gamma_cvx), ("gamma_jp", gamma_jp)):
        if not 0.0 <= v <= 100.0:
            raise OutOfRangeError(f"{name}={v} is outside [0, 100]")
    if not 0.0 <= cvx_weight <= 1.0:
        raise OutOfRangeError("cvx_weight must lie in [0, 1]")
    return cvx_weight * gamma_cvx + (1.0 - cvx_weight) * gamma_jp


@dataclass(frozen=True)
class CalibrationResult:
    g_star: float
    gamma: float
    clamp: Clamp
    kind: Kind
    delta_d: float
    fitted: np.ndarray

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "delta_d": self.delta_d,
            "g_star": self.g_star,
            "gamma": self.gamma,
            "clamp": self.clamp.value,
        }


def calibrate(curve, delta_d: float, s2_size: int, kind=None) -> CalibrationResult:
    sol = solve_gstar(curve, delta_d)
    if kind is None:
        kind = curve.kind if isinstance(curve, InterpolationCurve) else Kind.CVX
    return CalibrationResult(
        g_star=sol.g_star,
        gamma=gamma(sol.g_star, s2_size),
        clamp=sol.clamp,
        kind=Kind.parse(kind),
        delta_d=float(delta_d),
        fitted=sol.fitted,
    )
