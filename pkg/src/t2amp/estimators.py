"""Wideband amplitude estimators for joint WB + 1-bit SB amplitude feedback.

Three ways of choosing the WB amplitude of a beam from its subband amplitudes:

* ``linear``     -- arithmetic mean (the conventional choice)
* ``suboptimal`` -- mean scaled by 6/5
* ``optimal``    -- exact minimizer of the total squared SB quantization error,
  found by splitting the WB axis into S+1 intervals on which the 1-bit
  pattern is fixed and minimizing a one-dimensional quadratic on each

``brute_force_oracle`` evaluates the error function directly on a dense grid
and is kept independent of the interval search so the two can be compared.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .amplitude import (
    SB_THRESHOLD,
    EstimatorResult,
    InvalidInput,
    as_amplitudes,
    make_result,
)

# region boundaries sit where an SB amplitude crosses 3/4 of the WB amplitude
_BOUNDARY_SCALE = 4.0 / 3.0
SUBOPTIMAL_SCALE = 6.0 / 5.0


class Method(str, enum.Enum):
    LINEAR = "linear"
    OPTIMAL = "optimal"
    SUBOPTIMAL = "suboptimal"

    @classmethod
    def parse(cls, value) -> "Method":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InvalidInput(f"unknown method {value!r}") from None


@dataclass(frozen=True)
class RegionCandidate:
    n: int
    lower: float
    upper: float
    r_pattern: np.ndarray
    unconstrained_min: float
    clamped_min: float
    objective: float

    def contains(self, p: float) -> bool:
        return self.lower <= p <= self.upper


def linear_average_wb(p_sb) -> float:
    return float(np.mean(as_amplitudes(p_sb).values))


def suboptimal_wb(p_sb) -> float:
    return SUBOPTIMAL_SCALE * linear_average_wb(p_sb)


def _region_search(values: np.ndarray):
    """Arrays over regions n = 0..S for ascending ``values``.

    Returns ``(patterns, lower, upper, p_star, p_bar, g)``.
    """
    S = values.size
    patterns = np.where(np.arange(S)[None, :] < np.arange(S + 1)[:, None], 0.5, 1.0)
    bounds = _BOUNDARY_SCALE * values
    lower = np.concatenate(([-math.inf], bounds))
    upper = np.concatenate((bounds, [math.inf]))
    p_star = (patterns @ values) / np.einsum("ns,ns->n", patterns, patterns)
    # g is a convex parabola in p, so the endpoint nearer to an outside p_star
    # is also the endpoint with the smaller objective
    p_bar = np.clip(p_star, lower, upper)
    d = p_bar[:, None] * patterns - values[None, :]
    g = np.einsum("ns,ns->n", d, d)
    return patterns, lower, upper, p_star, p_bar, g


def region_candidates(p_sb) -> list[RegionCandidate]:
    """Per-region constrained minimizers over the ascending-sorted amplitudes.

    Region ``n`` halves the ``n`` smallest amplitudes.  Regions are closed on
    both ends; ``R_0`` and ``R_S`` are unbounded below and above.
    """
    values = np.sort(as_amplitudes(p_sb).values, kind="stable")
    patterns, lower, upper, p_star, p_bar, g = _region_search(values)
    patterns.setflags(write=False)
    return [
        RegionCandidate(n=n, lower=float(lower[n]), upper=float(upper[n]),
                        r_pattern=patterns[n], unconstrained_min=float(p_star[n]),
                        clamped_min=float(p_bar[n]), objective=float(g[n]))
        for n in range(values.size + 1)
    ]


def optimal_wb(p_sb) -> tuple[float, EstimatorResult]:
    p = as_amplitudes(p_sb)
    *_, p_bar, g = _region_search(np.sort(p.values, kind="stable"))
    # argmin returns the first minimum, i.e. the smallest n on ties
    wb = float(p_bar[int(np.argmin(g))])
    if not wb > 0:
        raise InvalidInput("optimal WB amplitude is not positive")
    return wb, make_result(p, wb)


def _grid_objective(points: np.ndarray, sorted_values: np.ndarray,
                    halved: np.ndarray | None = None) -> np.ndarray:
    # error of the SB quantizer at each point; ``halved`` counts the amplitudes
    # below 3/4 * point, which are the ones mapped to 1/2
    S = sorted_values.size
    if halved is None:
        halved = np.searchsorted(sorted_values, SB_THRESHOLD * points, side="left")
    prefix = np.concatenate(([0.0], np.cumsum(sorted_values)))
    k = np.arange(S + 1)
    sum_r2 = (0.25 * k + (S - k))[halved]
    sum_rp = (0.5 * prefix + (prefix[-1] - prefix))[halved]
    energy = float(np.dot(sorted_values, sorted_values))
    return np.maximum(points * (points * sum_r2 - 2.0 * sum_rp) + energy, 0.0)


def brute_force_oracle(p_sb, grid_points: int = 10**6) -> tuple[float, float]:
    """Dense-grid minimizer of the total squared SB quantization error.

    The grid covers ``[0, 4/3 * max + eps]``.  It is augmented with every point
    where an SB flips (``4/3 * p_s``) and the least-squares WB for every SB
    pattern the grid visits, plus the all-halved pattern used above the grid.
    Returns ``(wb, total_sq_error)``; ties go to the smaller WB.
    """
    if grid_points < 1000:
        raise InvalidInput("grid_points must be at least 1000")
    values = np.sort(as_amplitudes(p_sb).values)
    vmax = float(values[-1])
    top = _BOUNDARY_SCALE * vmax + 1e-6 * vmax
    grid = np.linspace(0.0, top, int(grid_points))

    S = values.size
    k_grid = np.searchsorted(values, SB_THRESHOLD * grid, side="left")
    k = np.flatnonzero(np.bincount(k_grid, minlength=S + 1))
    k = np.union1d(k, [S])
    prefix = np.concatenate(([0.0], np.cumsum(values)))
    ls_points = (0.5 * prefix[k] + (prefix[-1] - prefix[k])) / (0.25 * k + (S - k))

    extra = np.sort(np.concatenate((_BOUNDARY_SCALE * values, ls_points)))
    best_wb, best_g = math.nan, math.inf
    extra = extra[extra > 0]
    for pts, halved in ((grid[1:], k_grid[1:]), (extra, None)):
        g = _grid_objective(pts, values, halved)
        i = int(np.argmin(g))
        if g[i] < best_g or (g[i] == best_g and pts[i] < best_wb):
            best_wb, best_g = float(pts[i]), float(g[i])
    d = np.where(values >= SB_THRESHOLD * best_wb, 1.0, 0.5) * best_wb - values
    return best_wb, float(np.dot(d, d))


def wb_for_method(p_sb, method) -> float:
    method = Method.parse(method)
    if method is Method.LINEAR:
        return linear_average_wb(p_sb)
    if method is Method.SUBOPTIMAL:
        return suboptimal_wb(p_sb)
    return optimal_wb(p_sb)[0]


def evaluate_estimator(p_sb, method) -> EstimatorResult:
    method = Method.parse(method)
    p = as_amplitudes(p_sb)
    if method is Method.OPTIMAL:
        return optimal_wb(p)[1]
    return make_result(p, wb_for_method(p, method))
