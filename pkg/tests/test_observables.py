"""Effective mass, center-of-mass density, and the resonance peak."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polaritonkit.errors import InstabilityError, InvalidParameterError
from polaritonkit.model import ModelParams
from polaritonkit.observables import (
    DensityGridSpec,
    cm_density,
    cm_variances,
    effective_mass,
    resonance_argmax,
)

lam_st = st.floats(min_value=1e-6, max_value=10.0)
gamma2_st = st.floats(min_value=0.05, max_value=20.0)


def test_resonant_mass_ratio_golden_value():
    res = effective_mass(ModelParams(lam=1.0, gamma2=1.0))
    assert res.mass_ratio == pytest.approx(math.sqrt(5.0) / 2.0, rel=1e-14)
    assert res.fwhm_ratio == pytest.approx((math.sqrt(5.0) / 2.0) ** -0.5, rel=1e-14)


@pytest.mark.parametrize("gamma2", [0.5, 1.0, 2.0])
def test_mass_is_bare_at_zero_coupling(gamma2):
    assert effective_mass(ModelParams(lam=0.0, gamma2=gamma2)).mass_ratio == 1.0


def test_mass_returns_to_bare_far_off_resonance():
    ratios = [effective_mass(ModelParams(lam=1.0, gamma2=g2)).mass_ratio for g2 in (1e2, 1e4, 1e6)]
    assert ratios[0] > ratios[1] > ratios[2]
    assert ratios[2] == pytest.approx(1.0, abs=1e-6)


@given(lam=lam_st, gamma2=gamma2_st)
def test_mass_ratio_at_least_one_and_width_consistent(lam, gamma2):
    res = effective_mass(ModelParams(lam=lam, gamma2=gamma2))
    assert res.mass_ratio >= 1.0 - 1e-12
    assert res.fwhm_ratio == pytest.approx(res.mass_ratio**-0.5, rel=1e-12)


@pytest.mark.parametrize("gamma2", [0.5, 1.0, 2.0])
def test_mass_ratio_non_decreasing_in_coupling(gamma2):
    lams = np.linspace(0.0, 10.0, 201)
    ratios = [effective_mass(ModelParams(lam=float(l), gamma2=gamma2)).mass_ratio for l in lams]
    assert np.all(np.diff(ratios) >= -1e-12)


def test_effective_mass_refuses_unstable_spectrum():
    with pytest.raises(InstabilityError):
        effective_mass(ModelParams(lam=1.5, gamma2=1.0, include_a2=False))


def test_position_variance_matches_effective_mass():
    for lam, gamma2 in ((0.3, 0.7), (1.0, 1.0), (2.0, 3.0)):
        params = ModelParams(lam=lam, gamma2=gamma2)
        x_var, _ = cm_variances(params)
        ratio = effective_mass(params).mass_ratio
        assert x_var == pytest.approx(1.0 / (2.0 * ratio), rel=1e-12)


@given(lam=lam_st, gamma2=gamma2_st)
def test_heisenberg_bound(lam, gamma2):
    x_var, p_var = cm_variances(ModelParams(lam=lam, gamma2=gamma2))
    assert x_var * p_var >= 0.25 * (1.0 - 1e-12)


def test_variances_saturate_heisenberg_only_when_decoupled():
    x_var, p_var = cm_variances(ModelParams(lam=0.0, gamma2=0.5))
    assert x_var * p_var == pytest.approx(0.25, rel=1e-14)
    x_var, p_var = cm_variances(ModelParams(lam=1.0, gamma2=1.0))
    assert x_var * p_var > 0.25 + 1e-3


def test_density_profile_shape():
    params = ModelParams(lam=1.0, gamma2=1.0)
    profile = cm_density(params)
    n = profile.grid.size
    assert n == 1201
    assert profile.values[n // 2] == 1.0
    assert np.array_equal(profile.values, profile.values[::-1])
    ratio = profile.mass_ratio
    # Literal Gaussian profile in the effective mass.
    expected = np.exp(-ratio * profile.grid**2)
    assert np.max(np.abs(profile.values - expected)) == 0.0


def test_density_narrows_with_coupling():
    wide = cm_density(ModelParams(lam=0.0, gamma2=1.0))
    narrow = cm_density(ModelParams(lam=2.0, gamma2=1.0))
    k = 200
    assert narrow.values[k] < wide.values[k]


def test_grid_spec_validation():
    with pytest.raises(InvalidParameterError):
        DensityGridSpec(n_points=1200)
    with pytest.raises(InvalidParameterError):
        DensityGridSpec(half_width_sigma0=0.0)


def test_resonance_argmax_sits_at_unity():
    grid = np.arange(0.1, 3.0001, 0.01)
    for lam in (0.5, 1.0, 2.0):
        res = resonance_argmax(lam, grid)
        assert abs(res.gamma2 - 1.0) <= 0.01
        assert not res.degenerate


def test_resonance_argmax_flags_flat_scan():
    res = resonance_argmax(0.0, np.arange(0.5, 1.5, 0.1))
    assert res.degenerate
