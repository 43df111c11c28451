"""Profile-level distortion-rate and rate-distortion functions.

A sampling profile splits the samples into four disjoint fractions. The
encoder sees S1 only, both sources, S2 only, or nothing. Given the per-fraction
distortion-rate functions, the profile-level function is

    D(R) = min  sum_k w_k D_k(R_k / w_k) + w_none * Dmax   s.t.  sum_k R_k <= R,

with the convention that a zero-weight fraction gets no rate and contributes
nothing. The budget-level function minimizes this over the overlap theta12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ._search import bisect_decreasing, grid_then_golden
from .core import (
    DomainError,
    InfeasibleDistortionError,
    ProfileWeights,
    SamplingBudget,
    SamplingProfile,
    TargetFunction,
    theta12_bounds,
)
from .primitives import (
    FractionRdFunction,
    binary_and_indirect_fn,
    binary_direct_fn,
    constant_fn,
    gaussian_direct_fn,
    gaussian_indirect_fn,
)

WATERFILL_TOL = 1e-10
RATE_TOL = 1e-8
OVERLAP_GRID = 201
OVERLAP_TOL = 1e-6


@dataclass(frozen=True)
class FractionDecomposition:
    """Per-fraction weights and distortion-rate functions of one profile."""

    weight_only1: float
    weight_overlap: float
    weight_only2: float
    weight_none: float
    d1_fn: FractionRdFunction
    d12_fn: FractionRdFunction
    d2_fn: FractionRdFunction
    d_max: float
    target: Optional[TargetFunction] = None
    profile: Optional[SamplingProfile] = None
    model: object = None

    def __post_init__(self):
        ws = (self.weight_only1, self.weight_overlap, self.weight_only2, self.weight_none)
        if min(ws) < 0.0:
            raise DomainError("fraction weights must be nonnegative")
        if abs(sum(ws) - 1.0) > 1e-9:
            raise DomainError(f"fraction weights must sum to 1, got {sum(ws)!r}")

    @classmethod
    def from_weights(cls, weights: ProfileWeights, d1_fn, d12_fn, d2_fn, d_max, **kw):
        return cls(
            weights.only1, weights.overlap, weights.only2, weights.none,
            d1_fn, d12_fn, d2_fn, d_max, **kw,
        )

    @property
    def weights(self) -> ProfileWeights:
        return ProfileWeights(
            self.weight_only1, self.weight_overlap, self.weight_only2, self.weight_none
        )

    def fractions(self):
        """(name, weight, function) for the three observed fractions."""
        return (
            ("r1", self.weight_only1, self.d1_fn),
            ("r12", self.weight_overlap, self.d12_fn),
            ("r2", self.weight_only2, self.d2_fn),
        )


@dataclass(frozen=True)
class RateAllocation:
    """Rates (normalized to all n samples) spent on each observed fraction."""

    r1: float
    r2: float
    r12: float

    @property
    def total(self) -> float:
        return self.r1 + self.r2 + self.r12


@dataclass(frozen=True)
class DistortionAllocation:
    """Weighted distortion contributed by each observed fraction."""

    d1: float
    d2: float
    d12: float


def decompose(profile: SamplingProfile, model, target: TargetFunction) -> FractionDecomposition:
    """Build the fraction decomposition of one of the four shipped targets."""
    target = TargetFunction(target)
    target.check_model(model)
    w = profile.weights()
    if target is TargetFunction.GAUSSIAN_IDENTITY:
        # T = S1: only S2 is an indirect observation.
        d1 = d12 = gaussian_direct_fn(1.0)
        d2 = gaussian_indirect_fn(abs(model.rho), 1.0)
        dmax = 1.0
    elif target is TargetFunction.GAUSSIAN_SUM:
        var = model.sum_variance
        d12 = gaussian_direct_fn(var)
        d1 = d2 = gaussian_indirect_fn(model.rho_tilde, var)
        dmax = var
    elif target is TargetFunction.BINARY_XOR:
        # A single bit says nothing about S1 xor S2.
        d12 = binary_direct_fn(model.p)
        d1 = d2 = constant_fn(model.p)
        dmax = model.p
    else:
        q = (1.0 - model.p) / 2.0
        d12 = binary_direct_fn(q)
        d1 = d2 = constant_fn(q) if model.p == 0.5 else binary_and_indirect_fn(model.p)
        dmax = q
    return FractionDecomposition.from_weights(
        w, d1, d12, d2, dmax, target=target, profile=profile, model=model
    )


def decomposition_builder(budget: SamplingBudget, model, target) -> Callable[[float], FractionDecomposition]:
    return lambda theta12: decompose(budget.profile(theta12), model, target)


def _active(decomp: FractionDecomposition):
    """Fractions that can turn rate into lower distortion."""
    out = []
    for name, w, fn in decomp.fractions():
        if w > 0.0 and fn.d_max > fn.d_min:
            out.append((name, w, fn))
    return out


def _total_distortion(decomp: FractionDecomposition, rates: dict) -> float:
    total = decomp.weight_none * decomp.d_max
    for name, w, fn in decomp.fractions():
        if w > 0.0:
            total += w * float(fn(rates.get(name, 0.0) / w))
    return total


def _waterfill(active, R: float) -> dict:
    """Equalize marginal distortion reduction per bit across smooth fractions."""

    def spend(t: float) -> list[float]:
        lam = 2.0 ** t
        return [min(w * fn.rate_at_slope(lam), w * fn.saturation_rate) for _, w, fn in active]

    saturated = [w * fn.saturation_rate for _, w, fn in active]
    if sum(saturated) <= R:
        return {name: s for (name, _, _), s in zip(active, saturated)}
    # Bracket the multiplier from above by the largest initial marginal slope.
    lam_max = max(-fn.slope(0.0) for _, _, fn in active)
    t_hi = math.log2(min(lam_max, 1e12)) + 1.0
    w_min = min(w for _, w, _ in active)
    t_lo = t_hi - 2.0 * R / w_min - 20.0
    # 2^t underflows below t = -1074; beyond that the fractions are at their floors.
    t_lo = max(t_lo, -1000.0)
    while t_hi - t_lo > WATERFILL_TOL:
        mid = 0.5 * (t_lo + t_hi)
        if sum(spend(mid)) > R:
            t_lo = mid
        else:
            t_hi = mid
    rates = spend(t_hi)
    # Leftover rate (only when the multiplier floor was hit) goes to unsaturated fractions.
    leftover = R - sum(rates)
    open_ = [i for i, (_, _, fn) in enumerate(active) if math.isinf(fn.saturation_rate)]
    if leftover > 1e-9 and open_:
        share = sum(active[i][1] for i in open_)
        for i in open_:
            rates[i] += leftover * active[i][1] / share
    return {name: r for (name, _, _), r in zip(active, rates)}


def _simplex_search(
    active, R: float, n: int = 201, depth: int = 6, mu: float = 0.0, floor_max: float = -math.inf
) -> dict:
    """Dense grid over {sum of rates = R} with local refinement around the best point.

    With mu > 0 the objective gains mu times the largest per-sample
    distortion among the active fractions and ``floor_max``.
    """
    k = len(active)

    def objective(xs: list[np.ndarray]) -> np.ndarray:
        last = R - sum(xs)
        cols = xs + [last]
        val = np.zeros_like(last)
        worst = np.full_like(last, floor_max)
        for (_, w, fn), x in zip(active, cols):
            d = np.asarray(fn(np.maximum(x, 0.0) / w), dtype=float)
            val = val + w * d
            worst = np.maximum(worst, d)
        if mu > 0.0:
            val = val + mu * worst
        return np.where(last >= -1e-15, val, np.inf)

    if k == 1:
        return {active[0][0]: R}
    lo = np.zeros(k - 1)
    hi = np.full(k - 1, R)
    best = None
    for _ in range(depth):
        axes = [np.linspace(lo[i], hi[i], n if k == 2 else max(n // 2, 21)) for i in range(k - 1)]
        mesh = [m.ravel() for m in np.meshgrid(*axes, indexing="ij")]
        vals = objective(mesh)
        i = int(np.argmin(vals))
        point = np.array([m[i] for m in mesh])
        if best is None or vals[i] < best[1]:
            best = (point, float(vals[i]))
        steps = np.array([(a[-1] - a[0]) / (len(a) - 1) if len(a) > 1 else 0.0 for a in axes])
        lo = np.maximum(best[0] - 2.0 * steps, 0.0)
        hi = np.minimum(best[0] + 2.0 * steps, R)
    xs = list(best[0])
    rates = xs + [max(R - sum(xs), 0.0)]
    return {name: float(r) for (name, _, _), r in zip(active, rates)}


def distortion_rate_profile(decomp: FractionDecomposition, R: float):
    """Profile-level distortion at total rate R, with an achieving allocation."""
    if R < 0:
        raise DomainError("R must be nonnegative")
    active = _active(decomp)
    if R == 0.0 or not active:
        rates = {}
    elif all(fn.smooth for _, _, fn in active):
        rates = _waterfill(active, R)
    else:
        rates = _simplex_search(active, R)
    alloc = RateAllocation(rates.get("r1", 0.0), rates.get("r2", 0.0), rates.get("r12", 0.0))
    return _total_distortion(decomp, rates), alloc


def dmin_profile(decomp: FractionDecomposition) -> float:
    """Distortion floor of a profile: every observed fraction at its own floor."""
    return (
        decomp.weight_only1 * decomp.d1_fn.d_min
        + decomp.weight_overlap * decomp.d12_fn.d_min
        + decomp.weight_only2 * decomp.d2_fn.d_min
        + decomp.weight_none * decomp.d_max
    )


def _distortion_split(decomp: FractionDecomposition, alloc: RateAllocation) -> DistortionAllocation:
    def part(w, fn, r):
        return w * float(fn(r / w)) if w > 0.0 else 0.0

    return DistortionAllocation(
        part(decomp.weight_only1, decomp.d1_fn, alloc.r1),
        part(decomp.weight_only2, decomp.d2_fn, alloc.r2),
        part(decomp.weight_overlap, decomp.d12_fn, alloc.r12),
    )


def rate_distortion_profile(decomp: FractionDecomposition, D: float):
    """Smallest total rate reaching distortion D, with the achieving distortion split.

    Returns ``(math.inf, split)`` when D equals a floor that is only reached
    asymptotically.
    """
    floor = dmin_profile(decomp)
    if D < floor - 1e-12:
        raise InfeasibleDistortionError(D, floor)
    d0, alloc0 = distortion_rate_profile(decomp, 0.0)
    if D >= d0:
        return 0.0, _distortion_split(decomp, alloc0)

    def dr(r: float) -> float:
        return distortion_rate_profile(decomp, r)[0]

    hi = 1.0
    while dr(hi) > D + 1e-12:
        hi *= 2.0
        if hi > 1024.0:
            return math.inf, _distortion_split(decomp, distortion_rate_profile(decomp, hi)[1])
    rate = bisect_decreasing(dr, D + 1e-12, 0.0, hi, RATE_TOL)
    return rate, _distortion_split(decomp, distortion_rate_profile(decomp, rate)[1])


def dmin_budget(budget: SamplingBudget, d1_min: float, d2_min: float, d_max: float):
    """Budget-level distortion floor and its overlap.

    The profile floor is linear in theta12 with slope d_max - d1_min - d2_min,
    so the optimum sits at an end of the interval; ties go to the smaller end.
    """
    if min(d1_min, d2_min, d_max) < 0:
        raise DomainError("floors must be nonnegative")
    lo, hi = theta12_bounds(budget)
    theta12 = hi if d_max < d1_min + d2_min else lo
    t1, t2 = budget.theta1, budget.theta2
    value = (t1 - theta12) * d1_min + (t2 - theta12) * d2_min + (1.0 + theta12 - t1 - t2) * d_max
    return max(value, 0.0), theta12


def optimize_overlap(
    budget: SamplingBudget,
    R: float,
    decomp_builder: Callable[[float], FractionDecomposition],
    n: int = OVERLAP_GRID,
    tol: float = OVERLAP_TOL,
):
    """Minimize the profile distortion at rate R over the feasible overlap interval."""
    if R < 0:
        raise DomainError("R must be nonnegative")
    lo, hi = theta12_bounds(budget)

    def f(t: float) -> float:
        return distortion_rate_profile(decomp_builder(min(max(t, lo), hi)), R)[0]

    def f_vec(ts):
        return np.array([f(t) for t in ts])

    theta, value = grid_then_golden(f_vec, f, lo, hi, n, tol)
    return value, min(max(theta, lo), hi)


__all__ = [
    "DistortionAllocation",
    "FractionDecomposition",
    "RateAllocation",
    "decompose",
    "decomposition_builder",
    "distortion_rate_profile",
    "dmin_budget",
    "dmin_profile",
    "optimize_overlap",
    "rate_distortion_profile",
]
