import numpy as np
import pytest

from fracsampling import (
    DegenerateModelError,
    InfeasibleDistortionError,
    SamplingBudget,
    and_dmin,
    and_rd,
    binary_entropy,
    xor_rd,
)


def test_xor(budget):
    assert xor_rd(budget, 0.2, 0.2) == (0.0, 0.5)
    # Rate on the overlap is weighted by its size theta12* = 0.5.
    assert xor_rd(budget, 0.2, 0.1)[0] == pytest.approx(0.5 * binary_entropy(0.2), abs=1e-12)
    assert xor_rd(budget, 0.2, 0.15)[0] == pytest.approx(0.12647, abs=1e-4)


def test_xor_infeasible(budget):
    with pytest.raises(InfeasibleDistortionError) as exc:
        xor_rd(budget, 0.2, 0.05)
    assert exc.value.floor == pytest.approx(0.1)


def test_xor_only_depends_on_max_overlap():
    a = xor_rd(SamplingBudget(0.5, 0.75), 0.3, 0.2)
    b = xor_rd(SamplingBudget(0.5, 0.5), 0.3, 0.2)
    c = xor_rd(SamplingBudget(1.0, 0.5), 0.3, 0.2)
    assert a == b == c


@pytest.mark.parametrize(
    "p, dmin, t12, rmin",
    [(0.1, 0.0375, 0.25, 0.9982), (0.2, 0.075, 0.25, 0.9927), (0.4, 0.125, 0.5, 0.69)],
)
def test_and_dmin(budget, p, dmin, t12, rmin):
    d, t, r = and_dmin(budget, p)
    assert d == pytest.approx(dmin, abs=1e-12)
    assert t == t12
    assert r == pytest.approx(rmin, abs=5e-3)


def test_and_dmin_full_budget():
    d, t, r = and_dmin(SamplingBudget(1, 1), 0.2)
    assert (d, t) == (0.0, 1.0)
    assert r == pytest.approx(binary_entropy(0.4))


def test_and_rd_examples(budget):
    assert and_rd(budget, 0.2, 0.4).rate == 0.0
    assert and_rd(budget, 0.1, 0.0375).rate == pytest.approx(0.9982, abs=2e-3)


def test_and_rd_errors(budget):
    with pytest.raises(InfeasibleDistortionError):
        and_rd(budget, 0.1, 0.02)
    with pytest.raises(DegenerateModelError):
        and_rd(budget, 0.5, 0.2)


@pytest.mark.parametrize("p", [0.1, 0.2, 0.4])
def test_and_rd_reaches_rmin(budget, p):
    dmin, _, rmin = and_dmin(budget, p)
    assert and_rd(budget, p, dmin).rate == pytest.approx(rmin, abs=2e-3)


def test_and_solution_is_consistent(budget):
    p, D = 0.2, 0.2
    sol = and_rd(budget, p, D)
    q = (1 - p) / 2
    w_none = 1 + sol.theta12_star - 1.25
    assert sol.d3_star + sol.d12_star + q * w_none == pytest.approx(D, abs=1e-9)
    assert 0.0 <= sol.d12_star <= q * sol.theta12_star + 1e-12


def test_and_rd_convex_nonincreasing(budget):
    p = 0.2
    dmin = and_dmin(budget, p)[0]
    ds = np.linspace(dmin, 0.4, 50)
    rates = np.array([and_rd(budget, p, d).rate for d in ds])
    assert np.all(np.diff(rates) <= 1e-9)
    assert np.all(np.diff(rates, 2) >= -1e-8)


def test_p04_always_max_overlap(budget):
    dmin = and_dmin(budget, 0.4)[0]
    assert all(and_rd(budget, 0.4, d).theta12_star == pytest.approx(0.5) for d in np.linspace(dmin, 0.3, 12))
