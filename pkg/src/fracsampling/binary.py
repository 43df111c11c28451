"""Rate-distortion results for a doubly symmetric binary source pair.

Targets are T = S1 xor S2 and T = S1 and S2 under Hamming distortion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._search import golden_min_vec, is_better
from .core import (
    DegenerateModelError,
    DomainError,
    InfeasibleDistortionError,
    SamplingBudget,
    _entropy,
    theta12_bounds,
)
from .primitives import and_indirect_table

THETA_GRID = 201
THETA_TOL = 1e-6
INNER_TOL = 1e-7


@dataclass(frozen=True)
class BinaryAndSolution:
    """Optimal AND operating point.

    ``d3_star`` is the weighted distortion on the samples seen from one source
    only (both exclusive fractions pooled), ``d12_star`` on the overlap.
    """

    rate: float
    theta12_star: float
    d3_star: float
    d12_star: float


def _check_p(p: float) -> None:
    if not 0.0 <= p <= 0.5:
        raise DomainError(f"p must lie in [0, 1/2], got {p!r}")


def xor_rd(budget: SamplingBudget, p: float, D: float):
    """Rate-distortion function for T = S1 xor S2, returned as ``(R, theta12*)``.

    Only jointly measured samples carry information about the xor, so the
    overlap is as large as possible and the rate, normalized to all samples,
    is theta12* (h(p) - h(D12)) with D12 the per-sample distortion left for
    the overlap.
    """
    _check_p(p)
    if D < 0:
        raise DomainError("D must be nonnegative")
    _, t12 = theta12_bounds(budget)
    if D >= p:
        return 0.0, t12
    floor = (1.0 - t12) * p
    if D < floor - 1e-12:
        raise InfeasibleDistortionError(D, floor)
    d12 = min(max((D - (1.0 - t12) * p) / t12, 0.0), p)
    rate = t12 * (float(_entropy(np.asarray(p))) - float(_entropy(np.asarray(d12))))
    return max(rate, 0.0), t12


def and_dmin(budget: SamplingBudget, p: float):
    """Distortion floor for T = S1 and S2, its overlap and the rate reaching it.

    Returns ``(Dmin, theta12*, Rmin)``. The floor is linear in theta12 with
    slope (1 - 3p)/2, so the smallest overlap wins for p < 1/3 (and at the
    tie p = 1/3), the largest for p > 1/3.
    """
    _check_p(p)
    lo, hi = theta12_bounds(budget)
    t12 = lo if p <= 1.0 / 3.0 else hi
    t1, t2 = budget.theta1, budget.theta2
    dmin = (1.0 - p) / 2.0 + (p - 0.5) * (t1 + t2) + (1.0 - 3.0 * p) / 2.0 * t12
    hq = float(_entropy(np.asarray((1.0 - p) / 2.0)))
    rmin = t1 + t2 - (2.0 - hq) * t12
    return max(dmin, 0.0), t12, rmin


def _and_objective(table, hq, q, t12, d12, w3, rest):
    """Rate at overlap t12 when the overlap gets weighted distortion d12."""
    with np.errstate(divide="ignore", invalid="ignore"):
        x12 = np.where(t12 > 0.0, d12 / np.where(t12 > 0.0, t12, 1.0), q)
        x3 = np.where(w3 > 0.0, (rest - d12) / np.where(w3 > 0.0, w3, 1.0), q)
    direct = t12 * np.maximum(hq - _entropy(np.clip(x12, 0.0, q)), 0.0)
    indirect = w3 * np.asarray(table.rate(x3), dtype=float)
    return direct + indirect


def _d12_interval(p, q, t12, w3, rest):
    lo = np.maximum(0.0, rest - q * w3)
    hi = np.minimum(q * t12, rest - p * w3 / 2.0)
    return lo, hi


def and_rd(budget: SamplingBudget, p: float, D: float) -> BinaryAndSolution:
    """Rate-distortion function for T = S1 and S2.

    The distortion constraint is active at the optimum, so for each overlap
    the problem is 1-D in the overlap distortion d12 (the pooled exclusive
    fractions take the rest). That inner problem is convex and solved by
    golden section; the overlap itself is searched on a grid plus golden
    refinement of the best bracket.
    """
    _check_p(p)
    if p == 0.5:
        raise DegenerateModelError("p = 1/2: the AND target is independent of each single source")
    if D < 0:
        raise DomainError("D must be nonnegative")
    q = (1.0 - p) / 2.0
    t1, t2 = budget.theta1, budget.theta2
    lo, hi = theta12_bounds(budget)
    if D >= q:
        # Zero rate: every overlap ties; report the small-rate limit, the largest.
        return BinaryAndSolution(0.0, hi, (t1 + t2 - 2.0 * hi) * q, hi * q)
    dmin, _, _ = and_dmin(budget, p)
    if D < dmin - 1e-12:
        raise InfeasibleDistortionError(D, dmin)

    table = and_indirect_table(p)
    hq = float(_entropy(np.asarray(q)))

    def solve(t12: np.ndarray):
        w3 = t1 + t2 - 2.0 * t12
        rest = D - q * (1.0 + t12 - t1 - t2)
        a, b = _d12_interval(p, q, t12, w3, rest)
        ok = b >= a - 1e-12
        b = np.where(ok, np.maximum(a, b), a)
        d12, val = golden_min_vec(
            lambda x: _and_objective(table, hq, q, t12, x, w3, rest), a, b, INNER_TOL
        )
        return d12, np.where(ok, val, np.inf), w3, rest

    grid = np.linspace(lo, hi, THETA_GRID) if hi > lo else np.array([lo])
    d12s, vals, _, rests = solve(grid)
    if not np.any(np.isfinite(vals)):
        raise InfeasibleDistortionError(D, dmin)
    vmin = float(np.min(vals))
    i = int(np.argmax(vals <= vmin + 1e-12 * max(1.0, abs(vmin))))
    best = (float(grid[i]), float(d12s[i]), float(vals[i]))
    if grid.size > 1:
        a = float(grid[max(i - 1, 0)])
        b = float(grid[min(i + 1, grid.size - 1)])
        ts, _ = golden_min_vec(lambda t: solve(t)[1], np.array([a]), np.array([b]), THETA_TOL)
        d12, val, _, _ = solve(ts)
        if np.isfinite(val[0]) and is_better(float(val[0]), best[2]):
            best = (float(ts[0]), float(d12[0]), float(val[0]))
    t12, d12, rate = best
    d3 = D - d12 - q * (1.0 + t12 - t1 - t2)
    return BinaryAndSolution(max(rate, 0.0), t12, d3, d12)
