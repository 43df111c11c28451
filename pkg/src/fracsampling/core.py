"""Sampling budgets, sampling profiles, source models and binary entropy.

All logarithms are base 2, rates are in bits per source sample (normalized to
the total number of samples) and fractions are dimensionless.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

# Tolerance for algebraic identities (fraction bounds, weight sums).
ALGEBRAIC_TOL = 1e-12
# Tolerance for scalar root finding.
ROOT_TOL = 1e-10


class FracSamplingError(ValueError):
    """Base class for all errors raised by this package."""


class DomainError(FracSamplingError):
    """An argument lies outside the domain of the function."""


class InfeasibleDistortionError(FracSamplingError):
    """The requested distortion is below the achievable floor."""

    def __init__(self, target: float, floor: float, message: str | None = None):
        self.target = target
        self.floor = floor
        super().__init__(
            message or f"distortion {target:.9g} is below the achievable floor {floor:.9g}"
        )


class DegenerateModelError(FracSamplingError):
    """The source model makes the problem trivial or undefined."""


class RegimeError(FracSamplingError):
    """A closed form was called outside the rate regime where it holds."""


class NoFeasiblePointError(FracSamplingError):
    """No feasible point was found in a search box."""


def _check_fraction(name: str, value: float) -> None:
    if not (0.0 <= value <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")


@dataclass(frozen=True)
class SamplingBudget:
    """Fractions of samples the encoder may measure from each source."""

    theta1: float
    theta2: float

    def __post_init__(self):
        _check_fraction("theta1", self.theta1)
        _check_fraction("theta2", self.theta2)

    @property
    def overlap_bounds(self) -> tuple[float, float]:
        return theta12_bounds(self)

    def profile(self, theta12: float) -> SamplingProfile:
        return SamplingProfile(self.theta1, self.theta2, theta12)


@dataclass(frozen=True)
class ProfileWeights:
    """The four disjoint sample fractions induced by a sampling profile."""

    only1: float
    overlap: float
    only2: float
    none: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.only1, self.overlap, self.only2, self.none)


@dataclass(frozen=True)
class SamplingProfile:
    """A sampling budget together with the overlap fraction theta12.

    Construction does not enforce the overlap bounds; use
    :func:`validate_profile` to inspect a profile, or :meth:`weights`, which
    raises :class:`DomainError` for invalid profiles.
    """

    theta1: float
    theta2: float
    theta12: float

    @property
    def budget(self) -> SamplingBudget:
        return SamplingBudget(self.theta1, self.theta2)

    def weights(self) -> ProfileWeights:
        report = validate_profile(self)
        if not report.ok:
            raise DomainError(report.message())
        t1, t2, t12 = self.theta1, self.theta2, self.theta12
        raw = (t1 - t12, t12, t2 - t12, 1.0 + t12 - t1 - t2)
        # Clip float noise at the bounds so weights are exactly nonnegative.
        return ProfileWeights(*(max(0.0, w) for w in raw))


@dataclass(frozen=True)
class GaussianPairModel:
    """Zero-mean, unit-variance jointly Gaussian sources with correlation rho."""

    rho: float

    def __post_init__(self):
        if not (-1.0 <= self.rho <= 1.0):
            raise DomainError(f"rho must lie in [-1, 1], got {self.rho!r}")

    @property
    def rho_tilde(self) -> float:
        """Correlation between S1 + S2 and either source."""
        return math.sqrt((1.0 + self.rho) / 2.0)

    @property
    def sum_variance(self) -> float:
        return 2.0 * (1.0 + self.rho)


@dataclass(frozen=True)
class DsbsModel:
    """Doubly symmetric binary source: uniform bits with S1 xor S2 ~ Bernoulli(p)."""

    p: float

    def __post_init__(self):
        if not (0.0 <= self.p <= 0.5):
            raise DomainError(f"p must lie in [0, 1/2], got {self.p!r}")


class TargetFunction(enum.Enum):
    GAUSSIAN_IDENTITY = "gaussian-identity"
    GAUSSIAN_SUM = "gaussian-sum"
    BINARY_XOR = "binary-xor"
    BINARY_AND = "binary-and"

    @property
    def model_type(self) -> type:
        if self in (TargetFunction.GAUSSIAN_IDENTITY, TargetFunction.GAUSSIAN_SUM):
            return GaussianPairModel
        return DsbsModel

    def check_model(self, model) -> None:
        if not isinstance(model, self.model_type):
            raise DomainError(
                f"target {self.value!r} needs a {self.model_type.__name__}, "
                f"got {type(model).__name__}"
            )


def binary_entropy(x: ArrayLike):
    """Binary entropy h(x) in bits, with h(0) = h(1) = 0.

    Accepts a scalar or an array; scalars give back a float.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~((arr >= 0.0) & (arr <= 1.0))):
        raise DomainError("binary_entropy is defined on [0, 1]")
    out = _entropy(arr)
    return float(out) if out.ndim == 0 else out


def _entropy(x: np.ndarray) -> np.ndarray:
    # Internal variant: clips slight float excursions instead of raising.
    x = np.clip(x, 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        v = -x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x)
    return np.where((x > 0.0) & (x < 1.0), v, 0.0)


def inv_binary_entropy(r: ArrayLike, tol: float = ROOT_TOL):
    """Return the x in [0, 1/2] with h(x) = r, found by bisection."""
    arr = np.asarray(r, dtype=float)
    if np.any(~((arr >= 0.0) & (arr <= 1.0))):
        raise DomainError("inv_binary_entropy is defined on [0, 1]")
    out = _inv_entropy(arr, tol)
    return float(out) if out.ndim == 0 else out


def _inv_entropy(r: np.ndarray, tol: float = ROOT_TOL) -> np.ndarray:
    r = np.clip(r, 0.0, 1.0)
    lo = np.zeros_like(r)
    hi = np.full_like(r, 0.5)
    # h is strictly increasing on [0, 1/2].
    n_iter = int(math.ceil(math.log2(0.5 / tol))) + 1
    for _ in range(n_iter):
        mid = 0.5 * (lo + hi)
        below = _entropy(mid) < r
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    x = 0.5 * (lo + hi)
    x = np.where(r <= 0.0, 0.0, x)
    return np.where(r >= 1.0, 0.5, x)


def theta12_bounds(budget: SamplingBudget) -> tuple[float, float]:
    """Feasible interval ((theta1 + theta2 - 1)+, min(theta1, theta2)) for theta12."""
    lo = max(budget.theta1 + budget.theta2 - 1.0, 0.0)
    hi = min(budget.theta1, budget.theta2)
    return lo, hi


@dataclass(frozen=True)
class Violation:
    bound: str
    amount: float

    def __str__(self) -> str:
        return f"{self.bound} violated by {self.amount:.3g}"


@dataclass(frozen=True)
class ProfileReport:
    ok: bool
    violations: tuple[Violation, ...] = ()

    def message(self) -> str:
        if self.ok:
            return "ok"
        return "invalid sampling profile: " + "; ".join(map(str, self.violations))


def validate_profile(profile: SamplingProfile, tol: float = ALGEBRAIC_TOL) -> ProfileReport:
    """Check every sampling-profile invariant and report which ones fail."""
    violations = []
    for name in ("theta1", "theta2"):
        v = getattr(profile, name)
        if v < -tol:
            violations.append(Violation(f"{name} >= 0", -v))
        elif v > 1.0 + tol:
            violations.append(Violation(f"{name} <= 1", v - 1.0))
    t1, t2, t12 = profile.theta1, profile.theta2, profile.theta12
    lo = max(t1 + t2 - 1.0, 0.0)
    hi = min(t1, t2)
    if t12 < lo - tol:
        violations.append(Violation("theta12 >= theta12_min", lo - t12))
    if t12 > hi + tol:
        violations.append(Violation("theta12 <= theta12_max", t12 - hi))
    return ProfileReport(not violations, tuple(violations))
