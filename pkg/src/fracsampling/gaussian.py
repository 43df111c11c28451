"""Closed and semi-closed forms for jointly Gaussian sources under MSE.

Two targets ship: T = S1 (the encoder wants one source back) and
T = S1 + S2. Sources are unit-variance with correlation rho.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._search import golden_min_vec, is_better
from .core import (
    DegenerateModelError,
    DomainError,
    RegimeError,
    SamplingBudget,
    theta12_bounds,
)

THETA_GRID = 201
THETA_TOL = 1e-6


@dataclass(frozen=True)
class GaussianSumSolution:
    distortion: float
    theta12_star: float
    r12_star: float
    branch: str


def _check_rho(rho: float) -> None:
    if not -1.0 <= rho <= 1.0:
        raise DomainError(f"rho must lie in [-1, 1], got {rho!r}")


def _check_rate(R: float) -> None:
    if R < 0:
        raise DomainError("R must be nonnegative")


def identity_dr(budget: SamplingBudget, rho: float, R: float):
    """Distortion-rate function for T = S1, returned as ``(D, theta12*, R2*)``.

    The overlap is kept as small as possible. Below the rate threshold
    (theta1/2) log2(1/rho^2) only the S1 samples are described; above it the
    exclusive S2 samples receive rate R2* as well.
    """
    _check_rho(rho)
    _check_rate(R)
    t1, t2 = budget.theta1, budget.theta2
    t12, _ = theta12_bounds(budget)
    r2 = rho * rho
    threshold = math.inf if r2 == 0.0 else 0.5 * t1 * math.log2(1.0 / r2)
    if t1 == 0.0:
        # Nothing of S1 is observed directly; only S2 helps.
        w = t2
        if w == 0.0 or r2 == 0.0:
            return 1.0, t12, 0.0
        return 1.0 - r2 * w + r2 * w * 2.0 ** (-2.0 * R / w), t12, R
    if R <= threshold:
        return 1.0 - t1 + t1 * 2.0 ** (-2.0 * R / t1), t12, 0.0
    w = t1 + t2 - t12
    d = 1.0 - t1 - r2 * (t2 - t12) + w * 2.0 ** (-2.0 * R / w) * r2 ** ((t2 - t12) / w)
    r2_star = (t2 - t12) / w * (R - threshold)
    return d, t12, r2_star


def _eq_objective(t1, t2, rho, R, t12, r12):
    """Sum-target distortion at overlap t12 with rate r12 spent on the overlap.

    Works elementwise on arrays; zero-measure fractions contribute nothing.
    """
    a = (1.0 + rho) ** 2
    w = t1 + t2 - 2.0 * t12
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        excl = np.where(w > 0.0, a * w * np.exp2(-2.0 * (R - r12) / np.where(w > 0.0, w, 1.0)), 0.0)
        both = np.where(t12 > 0.0, t12 * np.exp2(-2.0 * r12 / np.where(t12 > 0.0, t12, 1.0)), 0.0)
    return excl + 2.0 * (1.0 + rho) * (1.0 + rho * t12 + both) - a * (t1 + t2)


def _inner(t1, t2, rho, R, t12):
    """Best rate split for each overlap in the array t12.

    The objective is a sum of two decaying exponentials in r12, hence convex;
    its stationary point (equal marginal returns on both terms) clipped to
    [0, R] is the minimizer.
    """
    t12 = np.atleast_1d(np.asarray(t12, dtype=float))
    w = t1 + t2 - 2.0 * t12
    with np.errstate(divide="ignore", invalid="ignore"):
        # (1+rho)^2 2^(-2(R-r)/w) = 2(1+rho) 2^(-2r/t12)
        r = (math.log2(2.0 / (1.0 + rho)) + 2.0 * R / w) / (2.0 / w + 2.0 / t12)
    r = np.where(w <= 0.0, R, np.where(t12 <= 0.0, 0.0, r))
    r = np.clip(np.nan_to_num(r, nan=0.0), 0.0, R)
    return r, _eq_objective(t1, t2, rho, R, t12, r)


def small_rate_threshold(budget: SamplingBudget, rho: float) -> float:
    """Rate below which the whole rate goes to the overlap for every feasible theta12."""
    lo, _ = theta12_bounds(budget)
    return 0.5 * lo * math.log2(2.0 / (1.0 + rho))


def _branch(budget: SamplingBudget, rho: float, R: float) -> str:
    if R == 0.0:
        return "zero-rate"
    if rho <= 0.0:
        _, hi = theta12_bounds(budget)
        return "low-rate" if R <= 0.5 * hi * math.log2(2.0 / (1.0 + rho)) else "high-rate"
    if R <= small_rate_threshold(budget, rho):
        return "small-rate"
    return "numeric"


def sum_dr(budget: SamplingBudget, rho: float, R: float) -> GaussianSumSolution:
    """Distortion-rate function for T = S1 + S2, optimized over overlap and rate split.

    The overlap is searched on a grid followed by golden-section refinement of
    the best bracket (the objective can be multimodal in theta12); for each
    overlap the rate split is a 1-D convex problem. At R = 0 every overlap
    gives var(T) and theta12_max, the small-rate optimum, is reported.
    """
    _check_rho(rho)
    _check_rate(R)
    if rho == -1.0:
        raise DegenerateModelError("rho = -1 makes S1 + S2 identically zero")
    t1, t2 = budget.theta1, budget.theta2
    lo, hi = theta12_bounds(budget)
    branch = _branch(budget, rho, R)
    if R == 0.0:
        return GaussianSumSolution(2.0 * (1.0 + rho), hi, 0.0, branch)

    grid = np.linspace(lo, hi, THETA_GRID) if hi > lo else np.array([lo])
    r12s, vals = _inner(t1, t2, rho, R, grid)
    vmin = float(np.min(vals))
    i = int(np.argmax(vals <= vmin + 1e-12 * max(1.0, abs(vmin))))
    best = (float(grid[i]), float(r12s[i]), float(vals[i]))
    if grid.size > 1:
        a = float(grid[max(i - 1, 0)])
        b = float(grid[min(i + 1, grid.size - 1)])
        t, r, v = _refine_overlap(t1, t2, rho, R, a, b)
        if is_better(v, best[2]):
            best = (t, r, v)
    return GaussianSumSolution(best[2], best[0], best[1], branch)


def _refine_overlap(t1, t2, rho, R, a, b):
    def f(t):
        return _inner(t1, t2, rho, R, t)[1]

    ts, vs = golden_min_vec(f, np.array([a]), np.array([b]), THETA_TOL)
    t = float(ts[0])
    r, v = _inner(t1, t2, rho, R, t)
    return t, float(r[0]), float(v[0])


def sum_dmin(budget: SamplingBudget, rho: float):
    """Distortion floor for T = S1 + S2 at unlimited rate, with its overlap.

    Positive correlation favors the smallest overlap, negative the largest;
    rho = 0 is a tie and resolves to the smallest.
    """
    _check_rho(rho)
    if rho == -1.0:
        raise DegenerateModelError("rho = -1 makes S1 + S2 identically zero")
    lo, hi = theta12_bounds(budget)
    t12 = hi if rho < 0.0 else lo
    d = 2.0 * (1.0 + rho) * (1.0 + rho * t12) - (1.0 + rho) ** 2 * (budget.theta1 + budget.theta2)
    return max(d, 0.0), t12


def sum_dr_nonpos_rho(budget: SamplingBudget, rho: float, R: float):
    """Closed form for rho <= 0, where the largest overlap is optimal at every rate.

    Returns ``(D, branch)`` with branch ``"low-rate"`` (all rate on the
    overlap) or ``"high-rate"``.
    """
    _check_rate(R)
    if not -1.0 < rho <= 0.0:
        raise DomainError("sum_dr_nonpos_rho needs -1 < rho <= 0")
    t1, t2 = budget.theta1, budget.theta2
    _, t12 = theta12_bounds(budget)
    var = 2.0 * (1.0 + rho)
    threshold = 0.5 * t12 * math.log2(2.0 / (1.0 + rho))
    if R <= threshold:
        if t12 == 0.0:
            return var, "low-rate"
        return var * (1.0 - t12 + t12 * 2.0 ** (-2.0 * R / t12)), "low-rate"
    w = t1 + t2 - t12
    a = (1.0 + rho) ** 2
    d = (
        w * a * 2.0 ** (-2.0 * R / w) * (2.0 / (1.0 + rho)) ** (t12 / w)
        + var * (1.0 + rho * t12)
        - a * (t1 + t2)
    )
    return d, "high-rate"


def sum_dr_smallrate(budget: SamplingBudget, rho: float, R: float) -> float:
    """Closed form for rho > 0 at rates small enough that the largest overlap wins.

    Raises :class:`RegimeError` above the threshold
    (theta12_min / 2) log2(2 / (1 + rho)).
    """
    _check_rate(R)
    if not 0.0 < rho <= 1.0:
        raise DomainError("sum_dr_smallrate needs 0 < rho <= 1")
    threshold = small_rate_threshold(budget, rho)
    if R > threshold + 1e-12:
        raise RegimeError(
            f"R = {R:.9g} exceeds the small-rate threshold {threshold:.9g}; use sum_dr"
        )
    _, t12 = theta12_bounds(budget)
    var = 2.0 * (1.0 + rho)
    if t12 == 0.0:
        return var
    return var * (1.0 - t12) + var * t12 * 2.0 ** (-2.0 * R / t12)
