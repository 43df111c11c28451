import math

import numpy as np
import pytest

from fracsampling import (
    DomainError,
    DsbsModel,
    GaussianPairModel,
    InfeasibleDistortionError,
    SamplingBudget,
    SamplingProfile,
    decompose,
    distortion_rate_profile,
    dmin_budget,
    dmin_profile,
    optimize_overlap,
    rate_distortion_profile,
    sum_dr,
)
from fracsampling import oracle


def _sum(profile, rho):
    return decompose(SamplingProfile(*profile), GaussianPairModel(rho), "gaussian-sum")


def test_zero_rate_is_weighted_dmax():
    d = _sum((0.5, 0.75, 0.25), 0.5)
    val, alloc = distortion_rate_profile(d, 0.0)
    expect = sum(w * fn.d_max for _, w, fn in d.fractions()) + d.weight_none * d.d_max
    assert val == pytest.approx(expect, abs=1e-12)
    assert alloc.total == 0.0


def test_identity_profile_value():
    d = decompose(SamplingProfile(0.5, 0.75, 0.25), GaussianPairModel(0.5), "gaussian-identity")
    assert distortion_rate_profile(d, 0.25)[0] == pytest.approx(0.75, abs=1e-9)


def test_single_fraction_profile():
    d = decompose(SamplingProfile(1.0, 0.0, 0.0), GaussianPairModel(0.3), "gaussian-identity")
    assert distortion_rate_profile(d, 1.0)[0] == pytest.approx(0.25, abs=1e-9)


def test_negative_rate_rejected():
    with pytest.raises(DomainError):
        distortion_rate_profile(_sum((0.5, 0.75, 0.25), 0.5), -1.0)


def test_rate_distortion_profile_examples():
    d = _sum((0.5, 0.75, 0.25), 0.5)
    assert rate_distortion_profile(d, d.d_max)[0] == 0.0
    full = _sum((1, 1, 1), 0.0)
    assert rate_distortion_profile(full, 0.5)[0] == pytest.approx(1.0, abs=1e-6)
    # Rate on the overlap, normalized to all samples: 0.5 (h(0.2) - h(0.1)).
    xor = decompose(SamplingProfile(0.5, 0.75, 0.5), DsbsModel(0.2), "binary-xor")
    assert rate_distortion_profile(xor, 0.15)[0] == pytest.approx(0.12647, abs=1e-4)


def test_rate_distortion_profile_below_floor():
    d = decompose(SamplingProfile(0.5, 0.75, 0.25), DsbsModel(0.1), "binary-and")
    with pytest.raises(InfeasibleDistortionError) as exc:
        rate_distortion_profile(d, 0.01)
    assert exc.value.floor == pytest.approx(0.0375, abs=1e-12)


def test_round_trip():
    for decomp in (_sum((0.5, 0.75, 0.3), 0.5), _sum((0.4, 0.4, 0.1), -0.3)):
        for R in (0.1, 0.5, 1.3):
            D, _ = distortion_rate_profile(decomp, R)
            assert rate_distortion_profile(decomp, D)[0] == pytest.approx(R, abs=1e-6)


def test_dmin_profile():
    d = decompose(SamplingProfile(0.5, 0.75, 0.25), DsbsModel(0.1), "binary-and")
    assert dmin_profile(d) == pytest.approx(0.0375, abs=1e-12)
    assert dmin_profile(_sum((1, 1, 1), 0.4)) == 0.0
    empty = _sum((0, 0, 0), 0.4)
    assert dmin_profile(empty) == pytest.approx(empty.d_max)


def test_dmin_budget():
    assert dmin_budget(SamplingBudget(0.5, 0.75), 0.75, 0.75, 3.0) == pytest.approx((0.5625, 0.25))
    assert dmin_budget(SamplingBudget(1, 1), 0.2, 0.2, 1.0) == pytest.approx((0.0, 1.0))
    q = 0.3
    assert dmin_budget(SamplingBudget(0.5, 0.75), 0.2, 0.2, q) == pytest.approx((0.125, 0.5))
    got = dmin_budget(SamplingBudget(0.5, 0.75), 0.75, 0.75, 3.0)
    assert got == pytest.approx(oracle.dmin_sweep(SamplingBudget(0.5, 0.75), 0.75, 0.75, 3.0))


def test_optimize_overlap(budget, sum_builder):
    for R in (0.1, 0.5, 1.0):
        assert optimize_overlap(budget, R, sum_builder(-0.5))[1] == pytest.approx(0.5, abs=1e-6)
    assert optimize_overlap(budget, 0.04, sum_builder(0.5))[1] == pytest.approx(0.5, abs=1e-6)
    val, t12 = optimize_overlap(budget, 1.0, sum_builder(0.5))
    assert t12 == pytest.approx(0.25, abs=1e-6)
    assert val == pytest.approx(sum_dr(budget, 0.5, 1.0).distortion, abs=1e-9)


def test_optimize_overlap_stays_in_bounds(sum_builder):
    for t1, t2 in ((0.3, 0.4), (0.9, 0.6), (0.2, 1.0)):
        b = SamplingBudget(t1, t2)
        lo, hi = b.overlap_bounds
        t12 = optimize_overlap(b, 0.7, sum_builder(0.6, b))[1]
        assert lo <= t12 <= hi


def test_convex_nonincreasing_in_rate():
    d = _sum((0.5, 0.75, 0.35), 0.5)
    vals = np.array([distortion_rate_profile(d, r)[0] for r in np.linspace(0, 3, 100)])
    assert np.all(np.diff(vals) <= 1e-12)
    assert np.all(np.diff(vals, 2) >= -1e-8)


def test_matches_brute_force_on_random_profiles():
    rng = np.random.default_rng(11)
    for _ in range(20):
        t1, t2 = rng.uniform(0.1, 1.0, 2)
        lo, hi = SamplingBudget(t1, t2).overlap_bounds
        t12 = rng.uniform(lo, hi)
        rho = rng.uniform(-0.9, 0.9)
        R = rng.uniform(0.05, 2.0)
        solver = distortion_rate_profile(_sum((t1, t2, t12), rho), R)[0]
        ref, _ = oracle.gaussian_profile_oracle(t1, t2, t12, rho, R, target="sum")
        assert solver == pytest.approx(ref, abs=1e-4)
        assert solver <= ref + 1e-9


def test_kkt_equal_marginal_distortion():
    d = _sum((0.6, 0.7, 0.35), 0.4)
    assert min(d.weights.as_tuple()) > 0
    _, alloc = distortion_rate_profile(d, 1.5)
    rates = {"r1": alloc.r1, "r12": alloc.r12, "r2": alloc.r2}
    slopes = [fn.slope(rates[name] / w) for name, w, fn in d.fractions() if rates[name] > 0]
    assert len(slopes) == 3
    assert max(slopes) - min(slopes) < 1e-5


def test_and_profile_uses_waterfilling():
    d = decompose(SamplingProfile(0.5, 0.75, 0.25), DsbsModel(0.1), "binary-and")
    assert rate_distortion_profile(d, 0.0375)[0] == pytest.approx(0.99819, abs=1e-4)
    assert math.isfinite(distortion_rate_profile(d, 0.4)[0])
