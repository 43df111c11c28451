import numpy as np
import pytest

from fracsampling import (
    DegenerateModelError,
    GaussianPairModel,
    RegimeError,
    SamplingBudget,
    decompose,
    distortion_rate_profile,
    identity_dr,
    optimize_overlap,
    small_rate_threshold,
    sum_dmin,
    sum_dr,
    sum_dr_nonpos_rho,
    sum_dr_smallrate,
)


def test_identity_branches(budget):
    d, t12, r2 = identity_dr(budget, 0.5, 0.25)
    assert (d, t12, r2) == pytest.approx((0.75, 0.25, 0.0), abs=1e-12)
    d, t12, r2 = identity_dr(budget, 0.5, 1.0)
    assert (d, r2) == pytest.approx((0.5, 0.25), abs=1e-12)


@pytest.mark.parametrize("R", [0.0, 0.3, 2.0])
def test_identity_single_source(R):
    assert identity_dr(SamplingBudget(1.0, 0.0), 0.4, R)[0] == pytest.approx(2 ** (-2 * R), abs=1e-12)


def test_identity_overlap_is_minimal(budget):
    for rho in np.linspace(-0.9, 0.9, 7):
        for R in (0.1, 0.5, 1.5):
            assert identity_dr(budget, rho, R)[1] == 0.25


def test_sum_examples(budget):
    assert sum_dr(budget, 0.5, 0.0).distortion == 3.0
    sol = sum_dr(budget, 0.5, 0.04)
    assert sol.distortion == pytest.approx(2 * 1.5 * 0.5 + 1.5 * 2 ** -0.16, abs=1e-9)
    assert sol.theta12_star == 0.5
    sol = sum_dr(budget, -0.5, 0.25)
    assert sol.distortion == pytest.approx(0.75, abs=1e-9)
    assert sol.theta12_star == 0.5


def test_sum_degenerate(budget):
    with pytest.raises(DegenerateModelError):
        sum_dr(budget, -1.0, 0.5)


def test_sum_dmin(budget):
    assert sum_dmin(budget, 0.5) == pytest.approx((0.5625, 0.25))
    assert sum_dmin(SamplingBudget(1, 1), 0.3) == pytest.approx((0.0, 1.0))
    assert sum_dmin(budget, -0.5) == pytest.approx((0.4375, 0.5))


def test_nonpos_rho(budget):
    d, branch = sum_dr_nonpos_rho(budget, -0.5, 0.25)
    assert d == pytest.approx(0.75) and branch == "low-rate"
    assert sum_dr_nonpos_rho(budget, 0.0, 0.0)[0] == pytest.approx(2.0)
    d, branch = sum_dr_nonpos_rho(budget, -0.5, 1.0)
    assert branch == "high-rate"
    assert d == pytest.approx(sum_dr(budget, -0.5, 1.0).distortion, abs=1e-6)


def test_small_rate(budget):
    assert sum_dr_smallrate(budget, 0.5, 0.04) == pytest.approx(2.8425, abs=1e-4)
    assert sum_dr_smallrate(budget, 0.5, 0.0) == pytest.approx(3.0)
    thr = small_rate_threshold(budget, 0.5)
    assert thr == pytest.approx(0.125 * np.log2(2 / 1.5), abs=1e-12)
    assert sum_dr_smallrate(budget, 0.5, thr) == pytest.approx(sum_dr(budget, 0.5, thr).distortion, abs=1e-5)
    with pytest.raises(RegimeError):
        sum_dr_smallrate(budget, 0.5, thr + 1e-3)


def test_continuity_across_regimes(budget):
    for rho in (-0.5, 0.5):
        for edge in (small_rate_threshold(budget, 0.5), 0.5):
            lo = sum_dr(budget, rho, edge - 1e-9).distortion
            hi = sum_dr(budget, rho, edge + 1e-9).distortion
            assert abs(lo - hi) < 1e-5


def test_rho_zero_overlap_indifferent_at_high_rate(budget):
    model = GaussianPairModel(0.0)
    vals = [
        distortion_rate_profile(decompose(budget.profile(t), model, "gaussian-sum"), 40.0)[0]
        for t in np.linspace(0.25, 0.5, 11)
    ]
    assert max(vals) - min(vals) < 1e-6


def test_agrees_with_generic_engine(budget):
    for rho in np.linspace(-0.9, 0.9, 10):
        model = GaussianPairModel(rho)
        for R in np.linspace(0.05, 2.0, 10):
            t12 = identity_dr(budget, rho, R)[1]
            generic = distortion_rate_profile(decompose(budget.profile(t12), model, "gaussian-identity"), R)[0]
            assert identity_dr(budget, rho, R)[0] == pytest.approx(generic, abs=1e-5)
    for rho in (-0.5, 0.2, 0.8):
        builder = lambda t, m=GaussianPairModel(rho): decompose(budget.profile(t), m, "gaussian-sum")
        for R in (0.1, 0.7):
            assert sum_dr(budget, rho, R).distortion == pytest.approx(optimize_overlap(budget, R, builder)[0], abs=1e-5)


def test_overlap_pattern(budget):
    for rho in (-0.5, 0.0):
        assert all(sum_dr(budget, rho, R).theta12_star == 0.5 for R in np.linspace(0, 1, 21))
    assert sum_dr(budget, 0.5, 1.0).theta12_star == pytest.approx(0.25, abs=1e-6)
