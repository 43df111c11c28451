"""Oracle-versus-solver instance sets, one per scenario.

Each check compares a solver value with the corresponding brute-force value
from :mod:`fracsampling.oracle`. Tolerances: 1e-4 for 1-D and 2-D searches,
1e-3 for 3-D ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from . import oracle
from .binary import and_rd, xor_rd
from .combiner import decompose, distortion_rate_profile
from .core import GaussianPairModel, SamplingBudget, SamplingProfile
from .gaussian import identity_dr, sum_dr, sum_dr_nonpos_rho, sum_dr_smallrate, small_rate_threshold
from .multihop import MultiHopRates, multihop_upper_bound, sideinfo_lower_bound
from .primitives import binary_and_indirect_rd
from .worstcase import dmu_profile, mu_transition

TOL_LOW_DIM = 1e-4
TOL_3D = 1e-3
MU_ANCHOR_TOL = 5e-3

BUDGET = SamplingBudget(0.5, 0.75)


@dataclass(frozen=True)
class Check:
    name: str
    solver: float
    reference: float
    tol: float

    @property
    def deviation(self) -> float:
        return abs(self.solver - self.reference)

    @property
    def ok(self) -> bool:
        return self.deviation <= self.tol


@dataclass
class ValidationReport:
    scenario: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, solver: float, reference: float, tol: float = TOL_LOW_DIM) -> None:
        self.checks.append(Check(name, float(solver), float(reference), tol))

    @property
    def max_deviation(self) -> float:
        return max((c.deviation for c in self.checks), default=0.0)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            flag = "ok  " if c.ok else "FAIL"
            out.append(
                f"{flag} {c.name}: solver={c.solver:.9g} reference={c.reference:.9g} "
                f"dev={c.deviation:.3g} tol={c.tol:.0e}"
            )
        out.append(f"{self.scenario}: max deviation {self.max_deviation:.3g} ({'pass' if self.ok else 'FAIL'})")
        return out


def _identity(report: ValidationReport) -> None:
    for rho in (0.5, -0.3, 0.9):
        for R in (0.25, 1.0, 2.0):
            d, t12, _ = identity_dr(BUDGET, rho, R)
            ref, _ = oracle.gaussian_profile_oracle(0.5, 0.75, t12, rho, R, target="identity")
            report.add(f"identity rho={rho} R={R}", d, ref)


def _sum(report: ValidationReport) -> None:
    for rho in (-0.5, 0.0, 0.5, 0.9):
        for R in (0.04, 0.3, 0.6, 1.0):
            ref, _ = oracle.sum_oracle(BUDGET, rho, R)
            report.add(f"sum rho={rho} R={R}", sum_dr(BUDGET, rho, R).distortion, ref)
    for R in (0.25, 1.0):
        ref, _ = oracle.sum_oracle(BUDGET, -0.5, R)
        report.add(f"sum rho<=0 closed form R={R}", sum_dr_nonpos_rho(BUDGET, -0.5, R)[0], ref)
    for R in (0.02, small_rate_threshold(BUDGET, 0.5)):
        ref, _ = oracle.sum_oracle(BUDGET, 0.5, R)
        report.add(f"sum small-rate closed form R={R:.6g}", sum_dr_smallrate(BUDGET, 0.5, R), ref)
    # The generic fraction combiner on fixed profiles.
    for t12, rho, R in ((0.25, 0.5, 0.3), (0.4, 0.2, 0.8), (0.5, -0.4, 1.5)):
        decomp = decompose(SamplingProfile(0.5, 0.75, t12), GaussianPairModel(rho), "gaussian-sum")
        ref, _ = oracle.gaussian_profile_oracle(0.5, 0.75, t12, rho, R, target="sum")
        report.add(f"profile t12={t12} rho={rho} R={R}", distortion_rate_profile(decomp, R)[0], ref)


def _xor(report: ValidationReport) -> None:
    for p in (0.1, 0.2, 0.4):
        for frac in (0.6, 0.8, 0.95):
            D = p * frac
            ref, _ = oracle.xor_oracle(BUDGET, p, D)
            report.add(f"xor p={p} D={D:.4g}", xor_rd(BUDGET, p, D)[0], ref)


def _and(report: ValidationReport) -> None:
    for p, D in ((0.2, 0.3), (0.1, 0.2), (0.4, 0.25)):
        ref, _ = oracle.and_indirect_oracle(p, D)
        report.add(f"and single-source p={p} D={D}", binary_and_indirect_rd(p, D), ref)
    for p, D in ((0.1, 0.0375), (0.2, 0.2), (0.4, 0.2)):
        ref, _ = oracle.and_oracle(BUDGET, p, D)
        report.add(f"and p={p} D={D}", and_rd(BUDGET, p, D).rate, ref)


def _multihop(report: ValidationReport) -> None:
    for r1 in (0.0, 0.1, 0.3, 1.0):
        ref, _ = oracle.sideinfo_oracle(BUDGET, 0.5, r1)
        report.add(f"side-info bound r1={r1}", sideinfo_lower_bound(r1, BUDGET, 0.5)[0], ref)
    ref, _ = oracle.sideinfo_oracle(BUDGET, -0.5, 0.3)
    report.add("side-info bound rho=-0.5 r1=0.3", sideinfo_lower_bound(0.3, BUDGET, -0.5)[0], ref)
    for r2 in (0.02, 0.1, 0.3):
        ref, _ = oracle.multihop_oracle(BUDGET, 0.5, 0.3, r2)
        sol = multihop_upper_bound(MultiHopRates(0.3, r2), BUDGET, 0.5)
        report.add(f"upper bound r1=0.3 r2={r2}", sol.distortion, ref, TOL_3D)


def _worstcase(report: ValidationReport) -> None:
    model = GaussianPairModel(0.5)
    profile = BUDGET.profile(0.25)
    decomp = decompose(profile, model, "gaussian-sum")
    for R, mu in ((0.3, 0.1), (0.3, 10.0), (0.6, 1.0)):
        ref, _ = oracle.worstcase_boundary_oracle(BUDGET, 0.5, R, mu)
        report.add(f"boundary R={R} mu={mu}", dmu_profile(R, profile, mu, decomp)[0], ref)

    def builder(t):
        return decompose(BUDGET.profile(t), model, "gaussian-sum")

    for R, anchor in ((0.3, 0.069), (0.6, 0.004)):
        report.add(f"mu* R={R}", mu_transition(R, BUDGET, builder), anchor, MU_ANCHOR_TOL)


SCENARIOS: dict[str, Callable[[ValidationReport], None]] = {
    "gaussian-identity": _identity,
    "gaussian-sum": _sum,
    "binary-xor": _xor,
    "binary-and": _and,
    "multihop": _multihop,
    "worstcase": _worstcase,
}


def validate(scenario: str) -> ValidationReport:
    if scenario not in SCENARIOS:
        raise KeyError(scenario)
    report = ValidationReport(scenario)
    SCENARIOS[scenario](report)
    return report


__all__ = ["Check", "SCENARIOS", "ValidationReport", "validate"]
