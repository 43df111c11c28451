"""One-dimensional search helpers shared by the solver modules.

Not used by :mod:`fracsampling.oracle`, which keeps its own brute-force code.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def is_better(value: float, incumbent: float) -> bool:
    """Strict improvement beyond float noise; near-ties keep the incumbent."""
    return value < incumbent - 1e-12 * max(1.0, abs(incumbent))


def golden_min(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-8):
    """Minimize a unimodal scalar function on [lo, hi].

    The endpoints are also evaluated so monotone objectives land exactly on
    the boundary. Returns ``(x, f(x))``.
    """
    if hi - lo <= tol:
        x = 0.5 * (lo + hi)
        return _best_of(f, [lo, x, hi])
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return _best_of(f, [lo, 0.5 * (a + b), hi])


def _best_of(f, xs):
    best_x, best_v = xs[0], f(xs[0])
    for x in xs[1:]:
        v = f(x)
        if is_better(v, best_v):
            best_x, best_v = x, v
    return best_x, best_v


def golden_min_vec(f: Callable[[np.ndarray], np.ndarray], lo, hi, tol: float = 1e-8):
    """Elementwise golden-section search over arrays of intervals.

    ``f`` maps an array of points (same shape as ``lo``) to objective values.
    Returns ``(x, f(x))`` arrays; endpoints are compared like in
    :func:`golden_min`.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    a, b = lo.copy(), hi.copy()
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    width = float(np.max(b - a)) if a.size else 0.0
    n_iter = 0 if width <= tol else int(math.ceil(math.log(tol / width) / math.log(INV_PHI)))
    for _ in range(n_iter):
        left = fc <= fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        d_new = np.where(left, c, a + INV_PHI * (b - a))
        c_new = np.where(left, b - INV_PHI * (b - a), d)
        f_probe = f(np.where(left, c_new, d_new))
        fd, fc = np.where(left, fc, f_probe), np.where(left, f_probe, fd)
        c, d = c_new, d_new
    mid = 0.5 * (a + b)
    best_x, best_v = lo, f(lo)
    for x in (mid, hi):
        v = f(x)
        with np.errstate(invalid="ignore"):  # inf - inf on infeasible entries
            take = v < best_v - 1e-12 * np.maximum(1.0, np.abs(best_v))
        best_x = np.where(take, x, best_x)
        best_v = np.where(take, v, best_v)
    return best_x, best_v


def grid_then_golden(
    f_vec: Callable[[np.ndarray], np.ndarray],
    f_scalar: Callable[[float], float],
    lo: float,
    hi: float,
    n: int,
    tol: float,
):
    """Uniform grid scan, then golden section on the bracket of the best point.

    No unimodality is assumed beyond the final bracket. Ties (within float
    noise) resolve to the smaller abscissa. Returns ``(x, f(x))``.
    """
    if hi - lo <= 0.0:
        return lo, float(f_scalar(lo))
    xs = np.linspace(lo, hi, n)
    vals = np.asarray(f_vec(xs), dtype=float)
    if not np.any(np.isfinite(vals)):
        return lo, math.inf
    vmin = np.nanmin(np.where(np.isfinite(vals), vals, np.inf))
    i = int(np.argmax(vals <= vmin + 1e-12 * max(1.0, abs(vmin))))
    x_best, v_best = float(xs[i]), float(vals[i])
    a = xs[max(i - 1, 0)]
    b = xs[min(i + 1, n - 1)]
    x_ref, v_ref = golden_min(f_scalar, float(a), float(b), tol)
    if is_better(v_ref, v_best):
        return x_ref, v_ref
    return x_best, v_best


def bisect_decreasing(g: Callable[[float], float], target: float, lo: float, hi: float, tol: float):
    """Find x in [lo, hi] with g(x) = target for a nonincreasing g.

    Assumes g(lo) >= target >= g(hi). Returns the upper end of the final
    bracket, where g(x) <= target.
    """
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if g(mid) > target:
            lo = mid
        else:
            hi = mid
    return hi
