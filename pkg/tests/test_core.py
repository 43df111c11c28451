import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracsampling import (
    DomainError,
    DsbsModel,
    GaussianPairModel,
    SamplingBudget,
    SamplingProfile,
    TargetFunction,
    binary_entropy,
    inv_binary_entropy,
    theta12_bounds,
    validate_profile,
)

unit = st.floats(0.0, 1.0, allow_nan=False)


@pytest.mark.parametrize("x, h", [(0.5, 1.0), (0.0, 0.0), (1.0, 0.0)])
def test_binary_entropy_exact(x, h):
    assert binary_entropy(x) == pytest.approx(h, abs=1e-12)


def test_binary_entropy_value():
    ref = -(0.3 * math.log2(0.3) + 0.7 * math.log2(0.7))
    assert binary_entropy(0.3) == pytest.approx(ref, abs=1e-12)
    assert binary_entropy(0.3) == pytest.approx(0.8813, abs=1e-4)


def test_binary_entropy_vectorized():
    out = binary_entropy(np.array([0.0, 0.11, 0.5]))
    assert out.shape == (3,)
    assert out[2] == 1.0


@pytest.mark.parametrize("bad", [-0.1, 1.1, float("nan")])
def test_binary_entropy_domain(bad):
    with pytest.raises(DomainError):
        binary_entropy(bad)


def test_inv_binary_entropy_anchors():
    assert inv_binary_entropy(1.0) == 0.5
    assert inv_binary_entropy(0.0) == 0.0
    assert inv_binary_entropy(0.8813) == pytest.approx(0.3, abs=1e-4)


@pytest.mark.parametrize("bad", [-1e-3, 1.5])
def test_inv_binary_entropy_domain(bad):
    with pytest.raises(DomainError):
        inv_binary_entropy(bad)


@given(st.floats(0.0, 0.5))
def test_entropy_round_trip(x):
    assert inv_binary_entropy(binary_entropy(x)) == pytest.approx(x, abs=1e-8)


@pytest.mark.parametrize(
    "t1, t2, lo, hi",
    [(0.5, 0.75, 0.25, 0.5), (1.0, 1.0, 1.0, 1.0), (0.3, 0.4, 0.0, 0.3)],
)
def test_theta12_bounds(t1, t2, lo, hi):
    assert theta12_bounds(SamplingBudget(t1, t2)) == pytest.approx((lo, hi), abs=1e-12)


@given(unit, unit, st.floats(0.0, 1.0))
def test_theta12_bounds_monotone_in_theta1(t1, t2, bump):
    t1b = min(1.0, t1 + bump)
    lo_a, hi_a = theta12_bounds(SamplingBudget(t1, t2))
    lo_b, hi_b = theta12_bounds(SamplingBudget(t1b, t2))
    assert lo_b >= lo_a and hi_b >= hi_a


@pytest.mark.parametrize("t1, t2", [(-0.1, 0.5), (0.5, 1.01)])
def test_budget_domain(t1, t2):
    with pytest.raises(DomainError):
        SamplingBudget(t1, t2)


def test_validate_profile():
    assert validate_profile(SamplingProfile(0.5, 0.75, 0.3)).ok
    high = validate_profile(SamplingProfile(0.5, 0.75, 0.6))
    assert not high.ok and "theta12_max" in high.violations[0].bound
    low = validate_profile(SamplingProfile(0.5, 0.75, 0.1))
    assert not low.ok and "theta12_min" in low.violations[0].bound
    assert low.violations[0].amount == pytest.approx(0.15)


def test_invalid_profile_weights_raise():
    with pytest.raises(DomainError, match="theta12"):
        SamplingProfile(0.5, 0.75, 0.6).weights()


@settings(max_examples=200)
@given(unit, unit, unit)
def test_profile_weights_sum_to_one(t1, t2, u):
    lo, hi = theta12_bounds(SamplingBudget(t1, t2))
    w = SamplingProfile(t1, t2, lo + u * (hi - lo)).weights()
    assert min(w.as_tuple()) >= 0.0
    assert sum(w.as_tuple()) == pytest.approx(1.0, abs=1e-12)


def test_models():
    m = GaussianPairModel(0.5)
    assert m.rho_tilde ** 2 == pytest.approx(0.75)
    assert m.sum_variance == 3.0
    with pytest.raises(DomainError):
        GaussianPairModel(1.2)
    with pytest.raises(DomainError):
        DsbsModel(0.7)


def test_target_model_check():
    TargetFunction("binary-and").check_model(DsbsModel(0.2))
    with pytest.raises(DomainError):
        TargetFunction.GAUSSIAN_SUM.check_model(DsbsModel(0.2))
