"""Two-hop computation of S1 + S2 for Gaussian sources.

Encoder 1 samples S1 and talks to Encoder 2 at rate r1; Encoder 2 samples S2
and talks to the decoder at rate r2. This module gives the two cut-set lower
bounds and the achievable distortion of a scheme that treats the sample
fractions separately and re-compresses the overlap at the relay.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._search import golden_min, is_better
from .core import DegenerateModelError, DomainError, SamplingBudget, theta12_bounds
from .gaussian import sum_dr

THETA_GRID = 201
INNER_GRID = 101
THETA_TOL = 1e-6
DESCENT_TOL = 1e-9
# Rate used as a stand-in for an unlimited link in consistency checks.
UNLIMITED_RATE = 30.0


@dataclass(frozen=True)
class MultiHopRates:
    r1: float
    r2: float

    def __post_init__(self):
        if self.r1 < 0 or self.r2 < 0:
            raise DomainError("link rates must be nonnegative")


@dataclass(frozen=True)
class MultiHopUpperSolution:
    """Achievable distortion with the optimal overlap and first-fraction/overlap rates.

    ``r11_star`` is spent on the S1-only samples (on both links),
    ``r22_star`` on the overlap over the second link.
    """

    distortion: float
    theta12_star: float
    r11_star: float
    r22_star: float


def _check_rho_open(rho: float) -> None:
    if not -1.0 <= rho <= 1.0:
        raise DomainError(f"rho must lie in [-1, 1], got {rho!r}")
    if abs(rho) == 1.0:
        raise DegenerateModelError("|rho| = 1: one source determines the other")


def sideinfo_lower_bound(r1: float, budget: SamplingBudget, rho: float):
    """Distortion with S2 samples available at the decoder for free.

    Returns ``(D, theta12*, branch)``; theta12* is the smallest overlap for
    rho > 0 and the largest for rho <= 0. branch is ``"low-rate"`` or
    ``"high-rate"``.
    """
    if r1 < 0:
        raise DomainError("r1 must be nonnegative")
    _check_rho_open(rho)
    t1, t2 = budget.theta1, budget.theta2
    lo, hi = theta12_bounds(budget)
    a = (1.0 + rho) ** 2
    var = 2.0 * (1.0 + rho)
    ratio = (1.0 - rho) / (1.0 + rho)
    if rho > 0.0:
        t12 = lo
        w = t1 - t12
        low = w > 0.0 and r1 <= 0.5 * w * math.log2(1.0 / ratio)
        if low:
            d = a * w * 2.0 ** (-2.0 * r1 / w) + a * (t12 - t1 - t2) + var
            return d, t12, "low-rate"
    else:
        t12 = hi
        low = t12 > 0.0 and r1 <= 0.5 * t12 * math.log2(ratio)
        if low:
            c = 1.0 - rho * rho
            d = c * t12 * 2.0 ** (-2.0 * r1 / t12) - c * t12 - a * t2 + var
            return d, t12, "low-rate"
    if t1 == 0.0:
        return var - a * t2, t12, "high-rate"
    d = (
        t1 * a * ratio ** (t12 / t1) * 2.0 ** (-2.0 * r1 / t1)
        + 2.0 * rho * (1.0 + rho) * t12
        - a * (t1 + t2)
        + var
    )
    return d, t12, "high-rate"


def decoder_cut_bound(r2: float, budget: SamplingBudget, rho: float) -> float:
    """Distortion when Encoder 2 observes S1's samples for free: a point-to-point problem at rate r2."""
    return sum_dr(budget, rho, r2).distortion


def recompress_d0(r1, r2, rho: float):
    """Two-hop distortion of the re-compress scheme on jointly observed samples."""
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    if np.any(r1 < 0) or np.any(r2 < 0):
        raise DomainError("rates must be nonnegative")
    d = _d0(r1, r2, rho)
    return float(d) if d.ndim == 0 else d


def _d0(r1, r2, rho):
    return (1.0 - rho * rho) * (1.0 - np.exp2(-2.0 * r2)) * np.exp2(-2.0 * r1) + 2.0 * (
        1.0 + rho
    ) * np.exp2(-2.0 * r2)


def _upper_objective(t1, t2, rho, R1, R2, t12, r11, r22):
    """Achievable distortion at overlap t12 with rates r11, r22 (elementwise)."""
    a = (1.0 + rho) ** 2
    w1 = t1 - t12
    w2 = t2 - t12
    r23 = R2 - r11 - r22
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        only1 = np.where(w1 > 0.0, a * w1 * np.exp2(-2.0 * r11 / np.where(w1 > 0.0, w1, 1.0)), 0.0)
        safe = np.where(t12 > 0.0, t12, 1.0)
        both = np.where(t12 > 0.0, t12 * _d0((R1 - r11) / safe, r22 / safe, rho), 0.0)
        only2 = np.where(w2 > 0.0, a * w2 * np.exp2(-2.0 * r23 / np.where(w2 > 0.0, w2, 1.0)), 0.0)
    val = only1 + both + only2 + 2.0 * rho * (1.0 + rho) * t12 - a * (t1 + t2) + 2.0 * (1.0 + rho)
    feasible = (r23 >= -1e-15) & (r11 <= R1 + 1e-15) & (r11 >= 0.0) & (r22 >= 0.0)
    return np.where(feasible, val, np.inf)


def _grid_inner(t1, t2, rho, R1, R2, t12s):
    """Best (r11, r22) on a grid for each overlap in t12s.

    r11 ranges over [0, min(R1, R2)] and r22 over a share of what is left on
    the second link, so every grid point is feasible.
    """
    cap = min(R1, R2)
    u = np.linspace(0.0, 1.0, INNER_GRID)
    r11 = (cap * u)[None, :, None]
    r22 = (R2 - r11) * u[None, None, :]
    t = np.asarray(t12s, dtype=float)[:, None, None]
    vals = _upper_objective(t1, t2, rho, R1, R2, t, r11, r22)
    flat = vals.reshape(len(t12s), -1)
    idx = np.argmin(flat, axis=1)
    i, j = np.unravel_index(idx, (INNER_GRID, INNER_GRID))
    best_r11 = cap * u[i]
    best_r22 = (R2 - best_r11) * u[j]
    return flat[np.arange(len(t12s)), idx], best_r11, best_r22


def _descend(t1, t2, rho, R1, R2, t12, r11, r22):
    """Coordinate descent from a grid point; each step is a 1-D golden search."""
    cap = min(R1, R2)

    def f(x, y):
        return float(_upper_objective(t1, t2, rho, R1, R2, t12, x, y))

    step1 = cap / (INNER_GRID - 1)
    step2 = R2 / (INNER_GRID - 1)
    val = f(r11, r22)
    for _ in range(60):
        x, vx = golden_min(
            lambda x: f(x, min(r22, R2 - x)), max(0.0, r11 - step1), min(cap, r11 + step1), 1e-12
        )
        y_hi = R2 - x
        y, vy = golden_min(lambda y: f(x, y), max(0.0, min(r22, y_hi) - step2), y_hi, 1e-12) \
            if y_hi > 0 else (0.0, f(x, 0.0))
        if not is_better(vy, val - DESCENT_TOL):
            if is_better(vy, val):
                r11, r22, val = x, y, vy
            break
        r11, r22, val = x, y, vy
    return val, r11, r22


def _inner(t1, t2, rho, R1, R2, t12):
    v, r11, r22 = _grid_inner(t1, t2, rho, R1, R2, np.array([t12]))
    return _descend(t1, t2, rho, R1, R2, t12, float(r11[0]), float(r22[0]))


def multihop_upper_bound(rates: MultiHopRates, budget: SamplingBudget, rho: float) -> MultiHopUpperSolution:
    """Achievable two-hop distortion, minimized over overlap and rate split.

    The inner (r11, r22) problem is not convex (the re-compress distortion is
    not), so it is searched on a grid with coordinate-descent polishing. The
    overlap is searched on a grid; the most promising candidates are polished
    and the best bracket refined by golden section. Ties go to the smaller
    overlap.
    """
    _check_rho_open(rho)
    R1, R2 = rates.r1, rates.r2
    t1, t2 = budget.theta1, budget.theta2
    lo, hi = theta12_bounds(budget)
    if R2 == 0.0:
        return MultiHopUpperSolution(2.0 * (1.0 + rho), lo, 0.0, 0.0)
    grid = np.linspace(lo, hi, THETA_GRID) if hi > lo else np.array([lo])
    vals, r11s, r22s = _grid_inner(t1, t2, rho, R1, R2, grid)

    order = np.argsort(vals, kind="stable")[:8]
    best = None
    for k in sorted(order):
        v, r11, r22 = _descend(t1, t2, rho, R1, R2, float(grid[k]), float(r11s[k]), float(r22s[k]))
        if best is None or is_better(v, best[0]):
            best = (v, float(grid[k]), r11, r22, k)
    v, t12, r11, r22, k = best
    if grid.size > 1:
        a = float(grid[max(k - 1, 0)])
        b = float(grid[min(k + 1, grid.size - 1)])
        t, _ = golden_min(lambda t: _inner(t1, t2, rho, R1, R2, t)[0], a, b, THETA_TOL)
        vt, r11t, r22t = _inner(t1, t2, rho, R1, R2, t)
        if is_better(vt, v):
            v, t12, r11, r22 = vt, t, r11t, r22t
    return MultiHopUpperSolution(v, t12, r11, r22)
