"""Brute-force minimizers and numerical property checks.

Everything here is written from the problem statements directly and shares no
code with the solver modules, so agreement between the two is evidence that
both are right. Objectives are vectorized: they receive one broadcastable
array per variable and return values, with ``inf`` or ``nan`` marking
infeasible points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .core import DomainError, NoFeasiblePointError, SamplingBudget

SHRINK = 10.0
DEFAULT_DEPTH = 4
CONVEXITY_SLACK = 1e-8
MONOTONE_SLACK = 1e-9


@dataclass(frozen=True)
class GridSpec:
    """Per-dimension search box, points per dimension and refinement depth."""

    bounds: tuple[tuple[float, float], ...]
    points: tuple[int, ...]
    depth: int = DEFAULT_DEPTH

    def __post_init__(self):
        if len(self.bounds) != len(self.points) or not 1 <= len(self.bounds) <= 3:
            raise DomainError("a grid has one to three dimensions, one point count each")
        for (lo, hi), n in zip(self.bounds, self.points):
            if n < 3:
                raise DomainError("each dimension needs at least 3 points")
            if not lo <= hi:
                raise DomainError(f"bounds must be ordered, got ({lo}, {hi})")
        if self.depth < 0:
            raise DomainError("depth must be nonnegative")

    @classmethod
    def uniform(cls, bounds, depth: int = DEFAULT_DEPTH) -> "GridSpec":
        """Default resolution: 101 points per axis up to 2-D, 51 in 3-D."""
        bounds = tuple(tuple(map(float, b)) for b in bounds)
        n = 51 if len(bounds) == 3 else 101
        return cls(bounds, (n,) * len(bounds), depth)


def grid_minimize(objective: Callable[..., np.ndarray], spec: GridSpec):
    """Exhaustive grid search with recursive zoom around the incumbent.

    Each level evaluates the full grid on the current box, then shrinks the
    box by a factor of 10 around the best point (clipped to the original
    bounds). Among equal values the lexicographically smallest point wins.
    Returns ``(value, argmin)`` with argmin a tuple.
    """
    outer = np.array(spec.bounds, dtype=float)
    box = outer.copy()
    best_val, best_x = math.inf, None
    for _ in range(spec.depth + 1):
        axes = [np.linspace(lo, hi, n) for (lo, hi), n in zip(box, spec.points)]
        mesh = np.meshgrid(*axes, indexing="ij")
        vals = np.asarray(objective(*mesh), dtype=float)
        vals = np.broadcast_to(vals, mesh[0].shape)
        vals = np.where(np.isfinite(vals), vals, np.inf)
        i = int(np.argmin(vals))
        v = float(vals.flat[i])
        if math.isfinite(v) and v < best_val:
            best_val = v
            best_x = np.array([m.flat[i] for m in mesh])
        if best_x is None:
            break
        width = (box[:, 1] - box[:, 0]) / SHRINK
        box = np.stack([best_x - width / 2.0, best_x + width / 2.0], axis=1)
        box[:, 0] = np.maximum(box[:, 0], outer[:, 0])
        box[:, 1] = np.minimum(box[:, 1], outer[:, 1])
    if best_x is None:
        raise NoFeasiblePointError("no feasible point in the search box")
    return best_val, tuple(float(x) for x in best_x)


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    violation: Optional[tuple] = None

    def __bool__(self) -> bool:
        return self.ok


def _as_samples(samples, min_len: int):
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise DomainError("samples must be a sequence of (x, f(x)) pairs")
    if len(arr) < min_len:
        raise DomainError(f"need at least {min_len} samples")
    if np.any(np.diff(arr[:, 0]) <= 0):
        raise DomainError("sample abscissae must be strictly increasing")
    return arr[:, 0], arr[:, 1]


def check_convexity(samples: Sequence[tuple[float, float]], slack: float = CONVEXITY_SLACK) -> CheckResult:
    """Check every consecutive triple for the chord inequality."""
    x, f = _as_samples(samples, 3)
    for i in range(len(x) - 2):
        a, b, c = x[i], x[i + 1], x[i + 2]
        lam = (c - b) / (c - a)
        if f[i + 1] > lam * f[i] + (1.0 - lam) * f[i + 2] + slack:
            return CheckResult(False, ((a, f[i]), (b, f[i + 1]), (c, f[i + 2])))
    return CheckResult(True)


def check_monotone(samples: Sequence[tuple[float, float]], slack: float = MONOTONE_SLACK) -> CheckResult:
    """Check that the samples are nonincreasing (flat steps allowed)."""
    x, f = _as_samples(samples, 2)
    for i in range(len(x) - 1):
        if f[i + 1] > f[i] + slack:
            return CheckResult(False, ((x[i], f[i]), (x[i + 1], f[i + 1])))
    return CheckResult(True)


# --- independent objectives --------------------------------------------------


def _h(x):
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        v = -x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x)
    return np.nan_to_num(v, nan=0.0)


def _wexp(w, r):
    """w * 2^(-2 r / w), read as 0 when w = 0."""
    w = np.asarray(w, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        v = w * np.exp2(-2.0 * r / np.where(w > 0, w, 1.0))
    return np.where(w > 0, v, 0.0)


def _span(budget: SamplingBudget):
    return max(budget.theta1 + budget.theta2 - 1.0, 0.0), min(budget.theta1, budget.theta2)


def gaussian_profile_oracle(theta1, theta2, theta12, rho, R, target="sum", **kw):
    """Rate allocation for a fixed Gaussian profile, searched over (r1, r2), r12 = R - r1 - r2."""
    w1, w12, w2 = theta1 - theta12, theta12, theta2 - theta12
    w0 = 1.0 + theta12 - theta1 - theta2
    if target == "sum":
        var = 2.0 * (1.0 + rho)
        g1 = g2 = (1.0 + rho) / 2.0  # squared correlation of S1 + S2 with one source
    else:
        var, g1, g2 = 1.0, 1.0, rho * rho

    def f(r1, r2):
        r12 = R - r1 - r2
        v = (
            var * (w1 * (1 - g1) + g1 * _wexp(w1, r1))
            + var * _wexp(w12, r12)
            + var * (w2 * (1 - g2) + g2 * _wexp(w2, r2))
            + var * w0
        )
        return np.where(r12 >= -1e-15, v, np.inf)

    if R == 0.0:
        return float(f(np.array(0.0), np.array(0.0))), (0.0, 0.0, 0.0)
    val, (r1, r2) = grid_minimize(f, GridSpec.uniform(((0, R), (0, R)), **kw))
    return val, (r1, r2, R - r1 - r2)


def sum_oracle(budget: SamplingBudget, rho: float, R: float, **kw):
    """Sum-target distortion over (theta12, r12); returns ``(D, (theta12, r12))``."""
    t1, t2 = budget.theta1, budget.theta2
    a = (1.0 + rho) ** 2

    def f(t12, r12):
        return (
            a * _wexp(t1 + t2 - 2 * t12, R - r12)
            + 2 * (1 + rho) * (1 + rho * t12 + _wexp(t12, r12))
            - a * (t1 + t2)
        )

    return grid_minimize(f, GridSpec.uniform((_span(budget), (0, R)), **kw))


def and_indirect_oracle(p: float, D: float, n: int = 101, depth: int = DEFAULT_DEPTH):
    """Rate to describe S1 and S2 from S1 alone within distortion D, over the test-channel y."""
    lo = (1.0 - p - 2.0 * D) / (1.0 - 2.0 * p)

    def f(y):
        return (
            _h(D + y * (1 - p) + (p - 1) / 2)
            - 0.5 * _h(y)
            - 0.5 * _h(2 * D + y * (1 - 2 * p) + p - 1)
        )

    return grid_minimize(f, GridSpec(((max(lo, 0.0), 1.0),), (n,), depth))


def _and_indirect_many(p: float, D: np.ndarray, n: int = 129, rounds: int = 4) -> np.ndarray:
    """Vectorized version of :func:`and_indirect_oracle` for many distortions at once."""
    D = np.clip(np.asarray(D, dtype=float), p / 2.0, (1.0 - p) / 2.0)
    shape = D.shape
    D = D.ravel()[:, None]
    lo = np.clip((1.0 - p - 2.0 * D) / (1.0 - 2.0 * p), 0.0, 1.0)
    hi = np.ones_like(lo)
    u = np.linspace(0.0, 1.0, n)[None, :]
    best = None
    for _ in range(rounds):
        y = lo + (hi - lo) * u
        v = _h(D + y * (1 - p) + (p - 1) / 2) - 0.5 * _h(y) - 0.5 * _h(2 * D + y * (1 - 2 * p) + p - 1)
        k = np.argmin(v, axis=1)
        rows = np.arange(len(D))
        vmin = v[rows, k]
        best = vmin if best is None else np.minimum(best, vmin)
        step = (hi - lo)[:, 0] / (n - 1)
        centre = y[rows, k]
        lo = np.maximum(centre - 2 * step, lo[:, 0])[:, None]
        hi = np.minimum(centre + 2 * step, hi[:, 0])[:, None]
    out = np.maximum(best, 0.0)
    return out.reshape(shape)


def and_oracle(budget: SamplingBudget, p: float, D: float, n: int = 101, depth: int = DEFAULT_DEPTH):
    """AND-target rate over (theta12, d12) with the exclusive fractions taking the rest."""
    t1, t2 = budget.theta1, budget.theta2
    q = (1.0 - p) / 2.0
    hq = float(_h(q))

    def f(t12, d12):
        w3 = t1 + t2 - 2 * t12
        d3 = D - d12 - q * (1 + t12 - t1 - t2)
        with np.errstate(divide="ignore", invalid="ignore"):
            x12 = np.where(t12 > 0, d12 / np.where(t12 > 0, t12, 1), q)
            x3 = np.where(w3 > 0, d3 / np.where(w3 > 0, w3, 1), q)
        ok = (d12 >= -1e-15) & (d12 <= q * t12 + 1e-15) & (d3 >= p * w3 / 2 - 1e-15) & (d3 <= q * w3 + 1e-15)
        # A fraction already at or past its zero-rate distortion needs no rate.
        direct = t12 * np.maximum(hq - _h(np.minimum(x12, q)), 0.0)
        indirect = np.where(w3 > 0, w3 * _and_indirect_many(p, x3), 0.0)
        return np.where(ok, direct + indirect, np.inf)

    lo, hi = _span(budget)
    return grid_minimize(f, GridSpec(((lo, hi), (0.0, q * hi)), (n, n), depth))


def xor_oracle(budget: SamplingBudget, p: float, D: float, **kw):
    """XOR-target rate over (theta12, per-sample overlap distortion x)."""
    hp = float(_h(p))

    def f(t12, x):
        ok = (1 - t12) * p + t12 * x <= D + 1e-15
        return np.where(ok, t12 * np.maximum(hp - _h(x), 0.0), np.inf)

    return grid_minimize(f, GridSpec.uniform((_span(budget), (0.0, p)), **kw))


def sideinfo_oracle(budget: SamplingBudget, rho: float, r1: float, **kw):
    """Side-information lower bound over (theta12, r11), the overlap taking r1 - r11."""
    t1, t2 = budget.theta1, budget.theta2
    a = (1.0 + rho) ** 2

    def f(t12, r11):
        return (
            (1 - rho * rho) * _wexp(t12, r1 - r11)
            + a * _wexp(t1 - t12, r11)
            + 2 * rho * (1 + rho) * t12
            - a * (t1 + t2)
            + 2 * (1 + rho)
        )

    return grid_minimize(f, GridSpec.uniform((_span(budget), (0, r1)), **kw))


def multihop_oracle(budget: SamplingBudget, rho: float, r1: float, r2: float, **kw):
    """Two-hop achievable distortion over (theta12, r11, r22)."""
    t1, t2 = budget.theta1, budget.theta2
    a = (1.0 + rho) ** 2

    def d0(x, y):
        return (1 - rho * rho) * (1 - np.exp2(-2 * y)) * np.exp2(-2 * x) + 2 * (1 + rho) * np.exp2(-2 * y)

    def f(t12, r11, r22):
        r23 = r2 - r11 - r22
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            s = np.where(t12 > 0, t12, 1.0)
            both = np.where(t12 > 0, t12 * d0((r1 - r11) / s, r22 / s), 0.0)
        v = (
            a * _wexp(t1 - t12, r11)
            + both
            + a * _wexp(t2 - t12, r23)
            + 2 * rho * (1 + rho) * t12
            - a * (t1 + t2)
            + 2 * (1 + rho)
        )
        return np.where((r23 >= -1e-15) & (r11 <= r1), v, np.inf)

    return grid_minimize(f, GridSpec.uniform((_span(budget), (0, min(r1, r2)), (0, r2)), **kw))


def worstcase_boundary_oracle(budget: SamplingBudget, rho: float, R: float, mu: float, **kw):
    """Average-plus-worst-case sum distortion at the smallest overlap, over r12."""
    t1, t2 = budget.theta1, budget.theta2
    tm = t1 + t2 - 1.0
    w = 2.0 - t1 - t2
    var = 2.0 * (1.0 + rho)
    g = (1.0 + rho) / 2.0

    def f(r12):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            a = var * (1 - g + g * np.exp2(-2 * (R - r12) / (w if w > 0 else 1.0)))
            b = var * np.exp2(-2 * r12 / (tm if tm > 0 else 1.0))
        avg = (w * a if w > 0 else 0.0) + (tm * b if tm > 0 else 0.0)
        worst = np.maximum(a if w > 0 else -np.inf, b if tm > 0 else -np.inf)
        return avg + mu * worst

    return grid_minimize(f, GridSpec.uniform(((0, R),), **kw))


def dmin_sweep(budget: SamplingBudget, d1_min: float, d2_min: float, d_max: float, n: int = 1001):
    """Distortion floor over an overlap sweep; returns ``(Dmin, theta12)`` with ties to the smaller overlap."""
    lo, hi = _span(budget)
    t = np.linspace(lo, hi, n)
    v = (budget.theta1 - t) * d1_min + (budget.theta2 - t) * d2_min + (1 + t - budget.theta1 - budget.theta2) * d_max
    i = int(np.argmin(v))
    return float(v[i]), float(t[i])
