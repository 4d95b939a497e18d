"""Truncated-basis oracle against the closed-form route.

These tests pin the oracle to frozen reference energies and then use it
the way the acceptance checks do: as an independent witness that the
normal-mode formulas describe the same Hamiltonian.
"""

import math

import numpy as np
import pytest

from polaritonkit.errors import UnconvergedStateError
from polaritonkit.fock import build_and_diagonalize, measure
from polaritonkit.model import ModelParams, derive
from polaritonkit.observables import cm_variances
from polaritonkit.photons import (
    photon_four_point,
    photon_occupation,
    photon_two_point,
)
from polaritonkit.spectrum import polariton_modes

# Frozen ground energies: resonance at unit coupling is (1/2)(phi + 1/phi)
# = sqrt(5)/2 exactly; the strong red-detuned point was recorded from a
# certified n_cut=160 solve and agrees with (omega_+ + omega_-)/2 to 2e-14.
GOLDEN_RESONANT_ENERGY = 1.118033988749895
STRONG_POINT = ModelParams(lam=2.0, gamma2=0.5)
STRONG_ENERGY = 1.0307764064043932
STRONG_OCCUPATION = 0.34887468762716523


def test_resonant_ground_energy_matches_closed_form():
    state = build_and_diagonalize(ModelParams(lam=1.0, gamma2=1.0))
    assert state.converged
    assert state.energy == pytest.approx(GOLDEN_RESONANT_ENERGY, abs=1e-10)


def test_certification_returns_grown_cutoff():
    state = build_and_diagonalize(ModelParams(lam=1.0, gamma2=1.0), n_cut=40)
    # Certification always compares against the next cutoff and returns
    # the larger one, so the result can never sit at the seed.
    assert state.n_cut >= 60
    assert state.converged


def test_strong_coupling_energy_frozen_and_closed_form():
    state = build_and_diagonalize(STRONG_POINT)
    assert state.converged
    assert state.energy == pytest.approx(STRONG_ENERGY, rel=1e-10)
    spec = polariton_modes(STRONG_POINT)
    half_sum = 0.5 * (spec.omega_plus + spec.omega_minus)
    assert state.energy == pytest.approx(half_sum, abs=1e-10)
    assert measure(state, "occupation") == pytest.approx(STRONG_OCCUPATION, rel=1e-9)


def test_uncertified_state_refuses_measurement():
    state = build_and_diagonalize(STRONG_POINT, n_cut=30, certify=False)
    assert not state.converged
    with pytest.raises(UnconvergedStateError):
        measure(state, "occupation")


def test_unknown_observable_rejected():
    state = build_and_diagonalize(ModelParams(lam=0.3, gamma2=1.0))
    with pytest.raises(ValueError):
        measure(state, "purity")


def test_cutoff_scan_is_variational():
    # Energies at fixed truncation bound the true ground energy from
    # above and improve monotonically as the basis grows.
    energies = [
        build_and_diagonalize(STRONG_POINT, n_cut=n, certify=False).energy
        for n in (20, 40, 60)
    ]
    assert energies[0] >= energies[1] - 1e-12
    assert energies[1] >= energies[2] - 1e-12
    assert energies[2] >= 0.5 * (polariton_modes(STRONG_POINT).omega_plus
                                 + polariton_modes(STRONG_POINT).omega_minus) - 1e-12


def test_odd_parity_sector_empty_and_normalized():
    state = build_and_diagonalize(ModelParams(lam=0.7, gamma2=1.4))
    n_states = state.n_cut + 1
    psi = state.amplitudes.reshape(n_states, n_states)
    n = np.arange(n_states)
    odd = (np.add.outer(n, n) % 2) == 1
    assert np.all(psi[odd] == 0.0)
    assert np.linalg.norm(state.amplitudes) == pytest.approx(1.0, abs=1e-12)


def test_zero_coupling_is_two_free_oscillators():
    params = ModelParams(lam=0.0, gamma2=1.7)
    dv = derive(params)
    state = build_and_diagonalize(params)
    expected = 0.5 * (params.omega_trap + dv.omega_tilde)
    assert state.energy == pytest.approx(expected, abs=1e-14)
    assert abs(measure(state, "occupation")) <= 1e-18


@pytest.mark.parametrize("lam,gamma2", [(0.5, 2.0), (1.0, 1.0)])
def test_observables_agree_with_closed_forms(lam, gamma2):
    params = ModelParams(lam=lam, gamma2=gamma2)
    state = build_and_diagonalize(params)
    x_var, p_var = cm_variances(params)
    assert measure(state, "occupation") == pytest.approx(
        photon_occupation(params), rel=1e-9
    )
    assert measure(state, "two_point") == pytest.approx(
        photon_two_point(params), rel=1e-9
    )
    assert measure(state, "four_point") == pytest.approx(
        photon_four_point(params), rel=1e-9
    )
    assert measure(state, "x_variance") == pytest.approx(x_var, rel=1e-9)
    assert measure(state, "p_variance") == pytest.approx(p_var, rel=1e-9)


def test_energy_scales_linearly_with_trap_frequency():
    # With lam and gamma2 fixed the whole Hamiltonian is proportional to
    # the trap frequency, truncated or not.
    base = build_and_diagonalize(
        ModelParams(lam=0.8, gamma2=1.2, omega_trap=1.0), n_cut=30, certify=False
    )
    doubled = build_and_diagonalize(
        ModelParams(lam=0.8, gamma2=1.2, omega_trap=2.0), n_cut=30, certify=False
    )
    assert doubled.energy == pytest.approx(2.0 * base.energy, rel=1e-12)
