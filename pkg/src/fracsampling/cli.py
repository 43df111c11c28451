"""Command-line front end: CSV sweeps over the solvers and the oracle checks.

Exit codes: 0 success, 1 usage or parameter error, 2 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from scipy.optimize import brentq

from .binary import and_dmin, and_rd, xor_rd
from .combiner import decompose
from .core import (
    FracSamplingError,
    GaussianPairModel,
    InfeasibleDistortionError,
    SamplingBudget,
)
from .gaussian import identity_dr, sum_dr
from .multihop import MultiHopRates, decoder_cut_bound, multihop_upper_bound, sideinfo_lower_bound
from .validation import SCENARIOS, validate
from .worstcase import dmu_budget

COLUMNS = [
    "scenario", "theta1", "theta2", "rho_or_p", "sweep_var", "sweep_value",
    "distortion", "rate", "theta12_star", "aux1", "aux2", "status",
]

# Sweep variables each scenario accepts; the first is the default.
SWEEPS = {
    "gaussian-identity": ("rate",),
    "gaussian-sum": ("rate",),
    "binary-xor": ("distortion", "rate"),
    "binary-and": ("distortion", "rate"),
    "multihop": ("r2",),
    "worstcase": ("mu", "rate"),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class SweepRequest:
    scenario: str
    theta1: float
    theta2: float
    params: tuple[float, ...]
    sweep: str
    start: float
    stop: float
    step: float
    r1: Optional[float] = None
    mu: Optional[float] = None
    rate: Optional[float] = None
    out: Optional[str] = None

    def __post_init__(self):
        if self.scenario not in SWEEPS:
            raise UsageError(f"unknown scenario {self.scenario!r}")
        if self.sweep not in SWEEPS[self.scenario]:
            allowed = ", ".join(SWEEPS[self.scenario])
            raise UsageError(f"scenario {self.scenario} sweeps over {allowed}, not {self.sweep}")
        if not self.step > 0:
            raise UsageError("--step must be positive")
        if self.stop < self.start:
            raise UsageError("--to must not be below --from")
        if not self.params:
            raise UsageError("give --rho for Gaussian scenarios or --p for binary ones")
        if self.scenario == "multihop" and self.r1 is None:
            raise UsageError("multihop needs --r1")
        if self.scenario == "worstcase":
            if self.sweep == "mu" and self.rate is None:
                raise UsageError("a mu sweep needs --rate")
            if self.sweep == "rate" and self.mu is None:
                raise UsageError("a rate sweep needs --mu")
        # Raises for out-of-range fractions.
        SamplingBudget(self.theta1, self.theta2)

    @property
    def is_binary(self) -> bool:
        return self.scenario.startswith("binary")

    def values(self) -> list[float]:
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [round(self.start + i * self.step, 12) for i in range(n)]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    return f"{x:.9g}"


def _row(req: SweepRequest, param: float, value: float, distortion=None, rate=None,
         theta12=None, aux1=None, aux2=None, status="ok") -> list[str]:
    return [
        req.scenario, _fmt(req.theta1), _fmt(req.theta2), _fmt(param), req.sweep, _fmt(value),
        _fmt(distortion), _fmt(rate), _fmt(theta12), _fmt(aux1), _fmt(aux2), status,
    ]


def _binary_rate_point(budget: SamplingBudget, p: float, R: float, rd):
    """Distortion reached at rate R by inverting a binary rate-distortion function."""
    q = p if rd is xor_rd else (1.0 - p) / 2.0
    dmin = (1.0 - min(budget.theta1, budget.theta2)) * p if rd is xor_rd else and_dmin(budget, p)[0]

    def rate_at(D):
        return xor_rd(budget, p, D)[0] if rd is xor_rd else and_rd(budget, p, D).rate

    if R >= rate_at(dmin):
        D = dmin
    elif R <= 0.0:
        D = q
    else:
        D = brentq(lambda d: rate_at(d) - R, dmin, q, xtol=1e-10)
    theta12 = xor_rd(budget, p, D)[1] if rd is xor_rd else and_rd(budget, p, D).theta12_star
    return D, theta12


def _points(req: SweepRequest, param: float) -> Iterator[list[str]]:
    budget = SamplingBudget(req.theta1, req.theta2)
    s = req.scenario
    for v in req.values():
        if s == "gaussian-identity":
            d, t12, r2 = identity_dr(budget, param, v)
            yield _row(req, param, v, d, v, t12, r2, None)
        elif s == "gaussian-sum":
            sol = sum_dr(budget, param, v)
            yield _row(req, param, v, sol.distortion, v, sol.theta12_star, sol.r12_star, sol.branch)
        elif req.is_binary:
            rd = xor_rd if s == "binary-xor" else and_rd
            if req.sweep == "distortion":
                try:
                    if rd is xor_rd:
                        r, t12 = xor_rd(budget, param, v)
                        yield _row(req, param, v, v, r, t12)
                    else:
                        sol = and_rd(budget, param, v)
                        yield _row(req, param, v, v, sol.rate, sol.theta12_star, sol.d3_star, sol.d12_star)
                except InfeasibleDistortionError as exc:
                    yield _row(req, param, v, v, aux1=exc.floor, status="infeasible")
            else:
                d, t12 = _binary_rate_point(budget, param, v, rd)
                yield _row(req, param, v, d, v, t12)
        elif s == "multihop":
            sol = multihop_upper_bound(MultiHopRates(req.r1, v), budget, param)
            lb1 = sideinfo_lower_bound(req.r1, budget, param)[0]
            lb2 = decoder_cut_bound(v, budget, param)
            yield _row(req, param, v, sol.distortion, v, sol.theta12_star, lb1, lb2)
        else:
            model = GaussianPairModel(param)

            def builder(t):
                return decompose(budget.profile(t), model, "gaussian-sum")

            rate, mu = (req.rate, v) if req.sweep == "mu" else (v, req.mu)
            d, t12 = dmu_budget(rate, budget, mu, builder)
            yield _row(req, param, v, d, rate, t12, mu, None)


def run_sweep(req: SweepRequest, stream=None) -> int:
    """Write the CSV for a request; returns the number of data rows."""
    rows = [r for param in req.params for r in _points(req, param)]
    if req.out:
        with open(req.out, "w", newline="") as fh:
            _write(fh, rows)
        print(f"{req.scenario}: wrote {len(rows)} rows to {req.out}", file=stream or sys.stdout)
    else:
        _write(stream or sys.stdout, rows)
    return len(rows)


def _write(fh, rows) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(COLUMNS)
    w.writerows(rows)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fracsampling", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sw = sub.add_parser("sweep", help="write a CSV sweep for one scenario")
    sw.add_argument("--scenario", required=True, choices=sorted(SWEEPS))
    sw.add_argument("--theta1", type=float, required=True)
    sw.add_argument("--theta2", type=float, required=True)
    group = sw.add_mutually_exclusive_group(required=True)
    group.add_argument("--rho", type=float, nargs="+", help="source correlation(s), Gaussian scenarios")
    group.add_argument("--p", type=float, nargs="+", help="crossover probability(ies), binary scenarios")
    sw.add_argument("--sweep", choices=["rate", "distortion", "r2", "mu"])
    sw.add_argument("--from", dest="start", type=float, required=True)
    sw.add_argument("--to", dest="stop", type=float, required=True)
    sw.add_argument("--step", type=float, required=True)
    sw.add_argument("--r1", type=float, help="first-hop rate (multihop)")
    sw.add_argument("--mu", type=float, help="worst-case weight for a worstcase rate sweep")
    sw.add_argument("--rate", type=float, help="link rate for a worstcase mu sweep")
    sw.add_argument("--out", help="CSV path (standard output if omitted)")

    va = sub.add_parser("validate", help="compare solvers with the brute-force oracles")
    va.add_argument("--scenario", required=True, choices=sorted(SCENARIOS))
    return parser


def _request(args) -> SweepRequest:
    binary = args.scenario.startswith("binary")
    if binary and args.p is None:
        raise UsageError(f"{args.scenario} needs --p")
    if not binary and args.rho is None:
        raise UsageError(f"{args.scenario} needs --rho")
    return SweepRequest(
        scenario=args.scenario,
        theta1=args.theta1,
        theta2=args.theta2,
        params=tuple(args.p if binary else args.rho),
        sweep=args.sweep or SWEEPS[args.scenario][0],
        start=args.start,
        stop=args.stop,
        step=args.step,
        r1=args.r1,
        mu=args.mu,
        rate=args.rate,
        out=args.out,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "validate":
            report = validate(args.scenario)
            print("\n".join(report.lines()))
            return 0 if report.ok else 2
        run_sweep(_request(args))
        return 0
    except (UsageError, FracSamplingError) as exc:
        print(f"fracsampling: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
