"""Trading average distortion against worst-case per-sample distortion.

The objective is D_mu = (average distortion) + mu * (largest expected
distortion over the sample fractions). When some samples are never measured,
the worst case is pinned at Dmax and the term is a constant; otherwise, which
for theta1 + theta2 >= 1 happens only at the smallest overlap, the max term
changes the optimal rate split.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from ._search import grid_then_golden
from .combiner import (
    FractionDecomposition,
    RateAllocation,
    _active,
    _simplex_search,
    distortion_rate_profile,
    optimize_overlap,
)
from .core import DomainError, SamplingBudget, SamplingProfile, TargetFunction, theta12_bounds

FAST_GRID = 4096
FAST_TOL = 1e-10
MU_TOL = 1e-4


def _check(R: float, mu: float) -> None:
    if R < 0:
        raise DomainError("R must be nonnegative")
    if mu < 0:
        raise DomainError("mu must be nonnegative")


def worst_case_term(profile: SamplingProfile, allocation: RateAllocation, decomp: FractionDecomposition) -> float:
    """Largest per-sample expected distortion over the nonempty fractions."""
    rates = {"r1": allocation.r1, "r12": allocation.r12, "r2": allocation.r2}
    worst = decomp.d_max if decomp.weight_none > 1e-12 else -math.inf
    for name, w, fn in decomp.fractions():
        if w > 0.0:
            worst = max(worst, float(fn(rates[name] / w)))
    return worst


def _has_unobserved(decomp: FractionDecomposition) -> bool:
    return decomp.weight_none > 1e-12


def _sum_fast_path(R: float, mu: float, decomp: FractionDecomposition):
    """Gaussian-sum case with no unobserved samples: 1-D search over the overlap rate.

    The two exclusive fractions share one distortion-rate function, and
    splitting their rate in proportion to their sizes equalizes (and so
    minimizes) both their average and their worst-case contribution; they
    merge into one fraction.
    """
    w_ex = decomp.weight_only1 + decomp.weight_only2
    w12 = decomp.weight_overlap
    d_ex, d12 = decomp.d1_fn, decomp.d12_fn

    def f(r12):
        r12 = np.asarray(r12, dtype=float)
        a = np.asarray(d_ex((R - r12) / w_ex), dtype=float) if w_ex > 0 else np.full_like(r12, -np.inf)
        b = np.asarray(d12(r12 / w12), dtype=float) if w12 > 0 else np.full_like(r12, -np.inf)
        avg = (w_ex * a if w_ex > 0 else 0.0) + (w12 * b if w12 > 0 else 0.0)
        return avg + mu * np.maximum(a, b)

    if w12 == 0.0:
        r12, val = 0.0, float(f(0.0))
    elif w_ex == 0.0:
        r12, val = R, float(f(R))
    else:
        r12, val = grid_then_golden(f, lambda x: float(f(x)), 0.0, R, FAST_GRID, FAST_TOL)
    rest = R - r12
    r1 = rest * decomp.weight_only1 / w_ex if w_ex > 0 else 0.0
    return val, RateAllocation(r1, rest - r1, r12)


def dmu_profile(R: float, profile: SamplingProfile, mu: float, decomp: FractionDecomposition):
    """Average-plus-worst-case distortion of one profile and an achieving allocation."""
    _check(R, mu)
    avg, alloc = distortion_rate_profile(decomp, R)
    if mu == 0.0:
        return avg, alloc
    if _has_unobserved(decomp):
        # The worst case is the unobserved fraction whatever the allocation.
        return avg + mu * decomp.d_max, alloc
    if decomp.target is TargetFunction.GAUSSIAN_SUM:
        return _sum_fast_path(R, mu, decomp)
    active = _active(decomp)
    fixed = [fn.d_max for _, w, fn in decomp.fractions() if w > 0.0 and fn.d_max <= fn.d_min]
    floor_max = max(fixed) if fixed else -math.inf
    if not active or R == 0.0:
        rates = {}
    else:
        rates = _simplex_search(active, R, mu=mu, floor_max=floor_max)
    alloc = RateAllocation(rates.get("r1", 0.0), rates.get("r2", 0.0), rates.get("r12", 0.0))
    avg = decomp.weight_none * decomp.d_max
    for name, w, fn in decomp.fractions():
        if w > 0.0:
            avg += w * float(fn(getattr(alloc, name) / w))
    return avg + mu * worst_case_term(profile, alloc, decomp), alloc


class _BudgetProblem:
    """Pieces of the budget-level problem; the interior optimum does not depend on mu."""

    def __init__(self, R: float, budget: SamplingBudget, decomp_builder: Callable[[float], FractionDecomposition]):
        self.R = R
        self.budget = budget
        self.builder = decomp_builder
        self.lo, self.hi = theta12_bounds(budget)
        self.interior_value, self.interior_theta = optimize_overlap(budget, R, decomp_builder)
        self.d_max = decomp_builder(self.lo).d_max
        self.boundary_decomp = decomp_builder(self.lo)
        self.all_unobserved = _has_unobserved(self.boundary_decomp)

    def boundary(self, mu: float) -> float:
        return dmu_profile(self.R, self.budget.profile(self.lo), mu, self.boundary_decomp)[0]

    def solve(self, mu: float):
        interior = self.interior_value + mu * self.d_max
        if mu == 0.0 or self.all_unobserved:
            return interior, self.interior_theta
        b = self.boundary(mu)
        # The boundary is never worse than the interior limit at theta12_min.
        if b <= interior + 1e-12 * max(1.0, abs(interior)) or self.interior_theta <= self.lo:
            return min(b, interior), self.lo
        return interior, self.interior_theta


def dmu_budget(R: float, budget: SamplingBudget, mu: float, decomp_builder: Callable[[float], FractionDecomposition]):
    """Minimize the average-plus-worst-case objective over the overlap; returns ``(D_mu, theta12*)``.

    Overlaps above theta12_min (or all overlaps when theta1 + theta2 < 1)
    leave some samples unobserved and add the constant mu * Dmax; the
    smallest overlap is solved separately. Ties go to the smaller overlap.
    """
    _check(R, mu)
    return _BudgetProblem(R, budget, decomp_builder).solve(mu)


def mu_transition(
    R: float,
    budget: SamplingBudget,
    decomp_builder: Callable[[float], FractionDecomposition],
    mu_hi: float = 1.0,
    tol: float = MU_TOL,
) -> float:
    """Smallest mu at which the optimal overlap switches to theta12_min.

    The boundary-minus-interior gap is nonincreasing in mu (its derivative is
    the boundary's worst-case distortion minus Dmax), so bisection applies.
    Returns 0 if the boundary already wins at mu = 0 and inf if it never does.
    """
    if R < 0:
        raise DomainError("R must be nonnegative")
    prob = _BudgetProblem(R, budget, decomp_builder)
    if prob.all_unobserved or prob.hi <= prob.lo:
        return math.inf if prob.interior_theta > prob.lo else 0.0

    def boundary_wins(mu: float) -> bool:
        return prob.solve(mu)[1] <= prob.lo

    if boundary_wins(0.0):
        return 0.0
    while not boundary_wins(mu_hi):
        mu_hi *= 2.0
        if mu_hi > 1e6:
            return math.inf
    lo, hi = 0.0, mu_hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if boundary_wins(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
