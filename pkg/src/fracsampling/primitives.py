"""Per-fraction rate-distortion building blocks.

Each fraction of samples (only S1 measured, both measured, only S2 measured)
contributes through a direct or indirect distortion-rate function of the
target. This module provides those functions for the Gaussian (MSE) and
doubly symmetric binary (Hamming) models, plus :class:`FractionRdFunction`,
the value type the profile combiner consumes.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.typing import ArrayLike
from scipy.interpolate import CubicSpline

from ._search import golden_min, golden_min_vec
from .core import (
    DegenerateModelError,
    DomainError,
    InfeasibleDistortionError,
    _entropy,
    _inv_entropy,
)

LN2 = math.log(2.0)


@dataclass(frozen=True)
class FractionRdFunction:
    """Distortion-rate function of the target over one fraction of samples.

    ``distortion`` maps a per-sample rate (array or scalar) to the expected
    per-sample distortion; it is nonincreasing and convex, equals ``d_max``
    at rate 0 and tends to ``d_min``. ``slope`` (dD/dR) and ``rate_at_slope``
    (the rate where -dD/dR equals a given multiplier, 0 if never) are present
    for smooth functions and enable water-filling; functions without them are
    handled by grid search. ``rate`` is the inverse, distortion to rate.
    """

    distortion: Callable[[ArrayLike], ArrayLike]
    d_min: float
    d_max: float
    slope: Optional[Callable[[float], float]] = None
    rate_at_slope: Optional[Callable[[float], float]] = None
    rate: Optional[Callable[[float], float]] = None
    # Rate beyond which d_min is reached exactly (inf when only asymptotic).
    saturation_rate: float = math.inf

    @property
    def smooth(self) -> bool:
        return self.slope is not None

    def __call__(self, r):
        return self.distortion(r)


def _check_nonneg(**kwargs) -> None:
    for name, value in kwargs.items():
        if np.any(np.asarray(value) < 0):
            raise DomainError(f"{name} must be nonnegative")


def _as_output(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


# --- Gaussian, mean squared error ------------------------------------------


def gaussian_direct_dr(variance: float, R: ArrayLike):
    """sigma^2 * 2^(-2R): distortion-rate function of a Gaussian source."""
    _check_nonneg(variance=variance, R=R)
    return _as_output(variance * np.exp2(-2.0 * np.asarray(R, dtype=float)))


def gaussian_indirect_dr(rho_tilde: float, variance: float, R: ArrayLike):
    """Remote Gaussian DR: the target has the given variance and correlation
    rho_tilde with the observed source."""
    if abs(rho_tilde) > 1.0:
        raise DomainError("|rho_tilde| must not exceed 1")
    _check_nonneg(variance=variance, R=R)
    r2 = rho_tilde * rho_tilde
    return _as_output(variance * (1.0 - r2 + r2 * np.exp2(-2.0 * np.asarray(R, dtype=float))))


def gaussian_direct_fn(variance: float) -> FractionRdFunction:
    return gaussian_indirect_fn(1.0, variance)


def gaussian_indirect_fn(rho_tilde: float, variance: float) -> FractionRdFunction:
    r2 = rho_tilde * rho_tilde
    floor = variance * (1.0 - r2)
    scale = variance * r2  # distortion reducible by coding

    def distortion(r):
        return _as_output(floor + scale * np.exp2(-2.0 * np.asarray(r, dtype=float)))

    def slope(r: float) -> float:
        return -2.0 * LN2 * scale * 2.0 ** (-2.0 * r)

    def rate_at_slope(lam: float) -> float:
        top = 2.0 * LN2 * scale
        if lam <= 0.0:
            return math.inf
        if top <= lam:
            return 0.0
        return 0.5 * math.log2(top / lam)

    def rate(d: float) -> float:
        if d >= variance:
            return 0.0
        if d <= floor:
            if d < floor:
                raise InfeasibleDistortionError(d, floor)
            return math.inf
        return 0.5 * math.log2(scale / (d - floor))

    return FractionRdFunction(
        distortion,
        d_min=floor,
        d_max=variance,
        slope=slope,
        rate_at_slope=rate_at_slope,
        rate=rate,
        saturation_rate=0.0 if scale == 0.0 else math.inf,
    )


def constant_fn(value: float) -> FractionRdFunction:
    """A fraction whose observation carries no information about the target."""

    def distortion(r):
        return _as_output(np.full(np.shape(r), value, dtype=float))

    return FractionRdFunction(
        distortion,
        d_min=value,
        d_max=value,
        slope=lambda r: 0.0,
        rate_at_slope=lambda lam: 0.0,
        rate=lambda d: 0.0,
        saturation_rate=0.0,
    )


# --- Binary, Hamming distortion --------------------------------------------


def binary_direct_rd(p_T: float, D: ArrayLike):
    """Rate-distortion function h(q) - h(D) of a Bernoulli(q) target, q = min(p_T, 1 - p_T)."""
    if not 0.0 <= p_T <= 1.0:
        raise DomainError("p_T must lie in [0, 1]")
    _check_nonneg(D=D)
    q = min(p_T, 1.0 - p_T)
    d = np.asarray(D, dtype=float)
    r = np.where(d < q, _entropy(np.full_like(d, q)) - _entropy(np.minimum(d, q)), 0.0)
    return _as_output(np.maximum(r, 0.0))


def binary_direct_dr(p_T: float, R: ArrayLike):
    """Inverse of :func:`binary_direct_rd`: h^-1(h(q) - R), zero once R >= h(q)."""
    if not 0.0 <= p_T <= 1.0:
        raise DomainError("p_T must lie in [0, 1]")
    _check_nonneg(R=R)
    q = min(p_T, 1.0 - p_T)
    hq = float(_entropy(np.asarray(q)))
    r = np.asarray(R, dtype=float)
    d = _inv_entropy(np.maximum(hq - r, 0.0))
    return _as_output(np.where(r >= hq, 0.0, np.minimum(d, q)))


def binary_direct_fn(p_T: float) -> FractionRdFunction:
    q = min(p_T, 1.0 - p_T)
    hq = float(_entropy(np.asarray(q)))

    def distortion(r):
        return binary_direct_dr(q, r)

    def slope(r: float) -> float:
        d = binary_direct_dr(q, r)
        if d <= 0.0:
            return 0.0
        logit = math.log2((1.0 - d) / d)
        return -math.inf if logit <= 0.0 else -1.0 / logit

    def rate_at_slope(lam: float) -> float:
        # -dD/dR = 1 / log2((1 - D) / D)  =>  D = 1 / (1 + 2^(1/lam))
        if lam <= 0.0:
            return hq
        d = 1.0 / (1.0 + 2.0 ** min(1.0 / lam, 1000.0))
        if d >= q:
            return 0.0
        return float(binary_direct_rd(q, d))

    def rate(d: float) -> float:
        return float(binary_direct_rd(q, d))

    return FractionRdFunction(
        distortion,
        d_min=0.0,
        d_max=q,
        slope=slope,
        rate_at_slope=rate_at_slope,
        rate=rate,
        saturation_rate=hq,
    )


def _and_objective(p: float, D, y):
    """Mutual information I(S1; T_hat) along the active distortion constraint."""
    a = D + y * (1.0 - p) + (p - 1.0) / 2.0
    x = 2.0 * D + y * (1.0 - 2.0 * p) + p - 1.0
    return _entropy(a) - 0.5 * _entropy(y) - 0.5 * _entropy(x)


def _check_and_args(p: float, D: float) -> None:
    if not 0.0 <= p <= 0.5:
        raise DomainError("p must lie in [0, 1/2]")
    if p == 0.5:
        raise DegenerateModelError(
            "p = 1/2: the AND target is independent of each single source"
        )
    if D < 0:
        raise DomainError("D must be nonnegative")
    if D < p / 2.0 - 1e-15:
        raise InfeasibleDistortionError(D, p / 2.0)


def binary_and_indirect_rd(p: float, D: float, grid: int = 4096, tol: float = 1e-10) -> float:
    """Rate needed to describe T = S1 AND S2 within Hamming distortion D from S1 alone.

    The test channel p(t_hat | s1) is parameterized by y = P(t_hat = 1 | s1 = 1);
    the objective is scanned on a dense y-grid and the best bracket refined by
    golden section (convexity in y is not assumed).
    """
    _check_and_args(p, D)
    q = (1.0 - p) / 2.0
    if D >= q:
        return 0.0
    if D <= p / 2.0:
        return 1.0
    y_lo = (1.0 - p - 2.0 * D) / (1.0 - 2.0 * p)
    ys = np.linspace(y_lo, 1.0, grid)
    vals = _and_objective(p, D, ys)
    i = int(np.argmin(vals))
    a, b = ys[max(i - 1, 0)], ys[min(i + 1, grid - 1)]
    _, v = golden_min(lambda y: float(_and_objective(p, D, y)), float(a), float(b), tol)
    return max(0.0, min(float(vals[i]), v))


def binary_and_indirect_dr(p: float, R: float, tol: float = 1e-8) -> float:
    """Smallest Hamming distortion for T = S1 AND S2 at rate R from S1 alone."""
    _check_and_args(p, p / 2.0)
    if R < 0:
        raise DomainError("R must be nonnegative")
    lo, hi = p / 2.0, (1.0 - p) / 2.0
    if R >= 1.0:
        return lo
    if R == 0.0:
        return hi
    # binary_and_indirect_rd is strictly decreasing on [p/2, (1 - p)/2].
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if binary_and_indirect_rd(p, mid) > R:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class AndIndirectTable:
    """Spline tabulation of :func:`binary_and_indirect_rd` for one p.

    Nodes are clustered towards D = p/2, where the rate has unbounded slope;
    the spline is taken in the clustering coordinate. Interpolation error is
    about 1e-11 in rate, so the table stands in for the direct evaluation
    inside optimizers.
    """

    def __init__(self, p: float, nodes: int = 1025, grid: int = 4096):
        _check_and_args(p, p / 2.0)
        self.p = p
        self.d_lo = p / 2.0
        self.d_hi = (1.0 - p) / 2.0
        u = np.linspace(0.0, 1.0, nodes)
        d = self.d_lo + (self.d_hi - self.d_lo) * u * u
        rates = np.concatenate(
            [_and_rd_block(p, d[i : i + 128], grid) for i in range(0, nodes, 128)]
        )
        rates[0], rates[-1] = 1.0, 0.0
        self._spline = CubicSpline(u, rates)

    def _u(self, d):
        span = self.d_hi - self.d_lo
        return np.sqrt(np.clip((np.asarray(d, dtype=float) - self.d_lo) / span, 0.0, 1.0))

    def rate(self, d):
        """Rate at per-sample distortion d (clamped to [p/2, (1 - p)/2])."""
        r = self._spline(self._u(d))
        return _as_output(np.clip(r, 0.0, 1.0))

    def _neg_rate_slope(self, u):
        # -dR/dD as a function of the clustering coordinate u.
        u = np.maximum(np.asarray(u, dtype=float), 1e-300)
        return -self._spline(u, 1) / (2.0 * u * (self.d_hi - self.d_lo))

    def slope(self, r: float) -> float:
        """dD/dR at rate r."""
        d = float(self.distortion(r))
        u = float(self._u(d))
        g = float(self._neg_rate_slope(u))
        return -1.0 / g if g > 0.0 else -math.inf

    def rate_at_slope(self, lam: float) -> float:
        """Rate where -dD/dR equals lam (0 if the zero-rate slope is already flatter)."""
        if lam <= 0.0:
            return 1.0
        target = 1.0 / lam
        if float(self._neg_rate_slope(1.0)) >= target:
            return 0.0
        lo, hi = 0.0, 1.0
        # -dR/dD decreases in D because the rate is convex.
        while hi - lo > 1e-13:
            mid = 0.5 * (lo + hi)
            if float(self._neg_rate_slope(mid)) > target:
                lo = mid
            else:
                hi = mid
        return float(self.rate(self.d_lo + (self.d_hi - self.d_lo) * hi * hi))

    def distortion(self, r, tol: float = 1e-12):
        """Inverse of :meth:`rate` by vectorized bisection."""
        r = np.asarray(r, dtype=float)
        lo = np.zeros_like(r)
        hi = np.ones_like(r)
        while True:
            mid = 0.5 * (lo + hi)
            above = self._spline(mid) > r
            lo = np.where(above, mid, lo)
            hi = np.where(above, hi, mid)
            if float(np.max(hi - lo, initial=0.0)) <= tol:
                break
        u = 0.5 * (lo + hi)
        d = self.d_lo + (self.d_hi - self.d_lo) * u * u
        d = np.where(r >= 1.0, self.d_lo, d)
        return _as_output(np.where(r <= 0.0, self.d_hi, d))


def _and_rd_block(p: float, d: np.ndarray, grid: int) -> np.ndarray:
    """Vectorized version of the y-scan plus golden refinement for many D at once."""
    q = (1.0 - p) / 2.0
    d = np.clip(d, p / 2.0, q)
    y_lo = (1.0 - p - 2.0 * d) / (1.0 - 2.0 * p)
    u = np.linspace(0.0, 1.0, grid)[None, :]
    ys = y_lo[:, None] + (1.0 - y_lo[:, None]) * u
    vals = _and_objective(p, d[:, None], ys)
    i = np.argmin(vals, axis=1)
    rows = np.arange(d.size)
    step = (1.0 - y_lo) / (grid - 1)
    a = np.maximum(y_lo, ys[rows, i] - step)
    b = np.minimum(1.0, ys[rows, i] + step)
    _, v = golden_min_vec(lambda y: _and_objective(p, d, y), a, b, 1e-12)
    return np.maximum(np.minimum(v, vals[rows, i]), 0.0)


@functools.lru_cache(maxsize=32)
def and_indirect_table(p: float) -> AndIndirectTable:
    return AndIndirectTable(p)


def binary_and_indirect_fn(p: float) -> FractionRdFunction:
    """Indirect DR of the AND target from one source, backed by the cached table.

    The slope comes from the spline derivative; the rate is convex in D, so
    the marginal slope is monotone and water-filling applies.
    """
    table = and_indirect_table(p)
    return FractionRdFunction(
        table.distortion,
        d_min=p / 2.0,
        d_max=(1.0 - p) / 2.0,
        slope=table.slope,
        rate_at_slope=table.rate_at_slope,
        rate=table.rate,
        saturation_rate=1.0,
    )
