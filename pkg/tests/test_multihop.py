import numpy as np
import pytest

from fracsampling import (
    DegenerateModelError,
    DomainError,
    MultiHopRates,
    decoder_cut_bound,
    multihop_upper_bound,
    recompress_d0,
    sideinfo_lower_bound,
    sum_dmin,
    sum_dr,
)
from fracsampling.multihop import UNLIMITED_RATE


def test_sideinfo_examples(budget):
    assert sideinfo_lower_bound(0.0, budget, 0.5)[0] == pytest.approx(0.75 * 0.75 + 0.25 * 3, abs=1e-12)
    d, t12, branch = sideinfo_lower_bound(0.3, budget, 0.5)
    assert d == pytest.approx(0.8452, abs=1e-3)
    assert (t12, branch) == (0.25, "high-rate")
    assert sideinfo_lower_bound(UNLIMITED_RATE, budget, 0.5)[0] == pytest.approx(sum_dmin(budget, 0.5)[0], abs=1e-4)


def test_sideinfo_degenerate(budget):
    with pytest.raises(DegenerateModelError):
        sideinfo_lower_bound(0.3, budget, 1.0)
    with pytest.raises(DomainError):
        sideinfo_lower_bound(-0.1, budget, 0.5)


def test_decoder_cut(budget):
    assert decoder_cut_bound(0.0, budget, 0.5) == 3.0
    assert decoder_cut_bound(1.0, budget, 0.5) == sum_dr(budget, 0.5, 1.0).distortion
    assert decoder_cut_bound(0.04, budget, 0.5) == pytest.approx(2.8425, abs=1e-3)


def test_recompress_d0():
    assert recompress_d0(0.0, 0.0, 0.3) == pytest.approx(2.6)
    assert recompress_d0(UNLIMITED_RATE, 0.7, 0.5) == pytest.approx(3 * 2 ** -1.4, abs=1e-8)
    assert recompress_d0(0.5, 0.5, 0.5) == pytest.approx(1.6875, abs=1e-12)
    with pytest.raises(DomainError):
        recompress_d0(-1.0, 0.0, 0.5)


def test_recompress_d0_not_jointly_convex():
    a, b = np.array([0.0, 0.0]), np.array([1.0, 0.1])
    mid = recompress_d0(*(0.5 * (a + b)), 0.5)
    chord = 0.5 * (recompress_d0(*a, 0.5) + recompress_d0(*b, 0.5))
    assert mid > chord + 1e-3


def test_upper_bound_examples(budget):
    assert multihop_upper_bound(MultiHopRates(0.3, 0.0), budget, 0.5).distortion == 3.0
    assert multihop_upper_bound(MultiHopRates(0.3, 0.02), budget, 0.5).theta12_star == pytest.approx(0.25, abs=1e-6)


def test_upper_bound_approaches_sideinfo(budget):
    lb = sideinfo_lower_bound(0.3, budget, 0.5)[0]
    gaps = [multihop_upper_bound(MultiHopRates(0.3, r2), budget, 0.5).distortion - lb for r2 in (2.0, 3.0, 4.0, 6.0)]
    assert all(g >= -1e-9 for g in gaps)
    assert gaps == sorted(gaps, reverse=True)
    # The overlap's second-link rate converges slowly; see the R2 = 3 acceptance check.
    assert gaps[2] < 2e-3
    assert gaps[3] < 1e-4


def test_upper_bound_dominates_lower_bounds(budget):
    for r1 in np.linspace(0.0, 1.5, 5):
        for r2 in np.linspace(0.0, 1.5, 5):
            ub = multihop_upper_bound(MultiHopRates(r1, r2), budget, 0.5).distortion
            lb = max(sideinfo_lower_bound(r1, budget, 0.5)[0], decoder_cut_bound(r2, budget, 0.5))
            assert ub >= lb - 1e-6


def test_upper_bound_monotone(budget):
    r2s = np.linspace(0, 0.6, 13)
    vals = [multihop_upper_bound(MultiHopRates(0.3, r), budget, 0.5).distortion for r in r2s]
    assert np.all(np.diff(vals) <= 1e-9)
    vals = [multihop_upper_bound(MultiHopRates(r, 0.4), budget, 0.5).distortion for r in np.linspace(0, 1, 6)]
    assert np.all(np.diff(vals) <= 1e-9)


def test_rates_validated():
    with pytest.raises(DomainError):
        MultiHopRates(-0.1, 0.2)
