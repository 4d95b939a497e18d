"""Weak magnetic-field response of the polariton branches.

A field along the cavity axis shifts the two branches at second order in
omega_B = eB/m.  The shifts are branch-selective through the mixing
angle, which moves the avoided-crossing gap and with it the probability
of a diabatic sweep, so a field can tune a Landau-Zener transition.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import InstabilityError, InvalidParameterError
from .model import ModelParams
from .spectrum import PolaritonSpectrum, polariton_modes

# Perturbative window: shifts are second order, trustworthy for
# omega_B / Omega below about 0.5.  Larger ratios warn but still report.
WEAK_FIELD_RATIO = 0.5

# critical_field scan window and resolution for the coarse bracketing
# pass; the root is then polished by bisection.
_SCAN_MAX_RATIO = 2.0
_SCAN_POINTS = 201
_BISECT_TOL = 1e-12


@dataclass(frozen=True)
class BFieldSpectrum:
    """Second-order branch shifts at one field strength.

    All frequencies are absolute (not ratios); omega_b_ratio records the
    input field as omega_B / Omega.
    """

    omega_b_ratio: float
    delta_plus: float
    delta_minus: float
    omega_plus_b: float
    omega_minus_b: float
    gap_b: float


def _require_stable(params: ModelParams) -> PolaritonSpectrum:
    spec = polariton_modes(params)
    if not spec.stable:
        raise InstabilityError(
            "field response undefined below the instability "
            f"(omega_minus_sq = {spec.omega_minus_sq})"
        )
    return spec


def bfield_spectrum(params: ModelParams, omega_b_ratio: float) -> BFieldSpectrum:
    """Branch frequencies with the second-order field shifts applied.

        delta_+ = Omega_+ omega_B^2 / (2 Omega^2 (1 + Lambda^2))
        delta_- = Omega_- omega_B^2 Lambda^2 / (2 Omega^2 (1 + Lambda^2))

    Both shifts are positive; the upper branch takes the photon-like
    weight and the lower branch the Lambda^2 complement.  At resonance
    Lambda^2 = (Omega_+/Omega)^2 and Omega_- = Omega^2/Omega_+ make the
    two shifts equal, so the gap is field-independent there.
    """
    if omega_b_ratio < 0.0:
        raise InvalidParameterError(f"omega_b_ratio must be >= 0, got {omega_b_ratio}")
    if omega_b_ratio > WEAK_FIELD_RATIO:
        warnings.warn(
            f"omega_b_ratio = {omega_b_ratio} exceeds the weak-field regime "
            f"(> {WEAK_FIELD_RATIO}); second-order shifts may be inaccurate",
            stacklevel=2,
        )
    spec = _require_stable(params)
    big_omega = params.omega_trap
    omega_b = omega_b_ratio * big_omega
    lam_sq = spec.mixing_lambda**2
    prefactor = omega_b**2 / (2.0 * big_omega**2 * (1.0 + lam_sq))
    delta_plus = spec.omega_plus * prefactor
    delta_minus = spec.omega_minus * lam_sq * prefactor
    return BFieldSpectrum(
        omega_b_ratio=omega_b_ratio,
        delta_plus=delta_plus,
        delta_minus=delta_minus,
        omega_plus_b=spec.omega_plus + delta_plus,
        omega_minus_b=spec.omega_minus + delta_minus,
        gap_b=(spec.omega_plus + delta_plus) - (spec.omega_minus + delta_minus),
    )


def landau_zener(params: ModelParams, omega_b_ratio: float, velocity_factor: float) -> float:
    """Diabatic transition probability for a sweep through the crossing.

        P = exp(-pi v_f (Delta_B / Omega)^2)

    with Delta_B the field-shifted gap and v_f a dimensionless inverse
    sweep rate.  Monotone decreasing in the gap at fixed v_f.
    """
    if velocity_factor <= 0.0:
        raise InvalidParameterError(f"velocity_factor must be > 0, got {velocity_factor}")
    gap = bfield_spectrum(params, omega_b_ratio).gap_b
    return math.exp(-math.pi * velocity_factor * (gap / params.omega_trap) ** 2)


def critical_field(
    params: ModelParams, gamma2_offres: float, velocity_factor: float
) -> float | None:
    """Smallest field equalizing on- and off-resonance sweep fidelity.

    Compares the Landau-Zener probability at gamma2 = 1 against the one
    at gamma2_offres (> 1 required: the off-resonant gap must start
    above the resonant one) as the field grows.  The resonant gap is
    field-independent while the off-resonant one shrinks with field, so
    the two probabilities can cross.  Returns the first crossing of
    omega_B / Omega in (0, 2], or None if the curves never meet there;
    absence is a meaningful result, not an error.
    """
    if gamma2_offres <= 1.0:
        raise InvalidParameterError(
            f"gamma2_offres must be > 1 (off resonance above the trap), got {gamma2_offres}"
        )
    on_res = params.replace(gamma2=1.0)
    off_res = params.replace(gamma2=gamma2_offres)

    def difference(ratio: float) -> float:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return landau_zener(off_res, ratio, velocity_factor) - landau_zener(
                on_res, ratio, velocity_factor
            )

    ratios = [i * _SCAN_MAX_RATIO / (_SCAN_POINTS - 1) for i in range(_SCAN_POINTS)]
    previous = difference(ratios[0])
    for lo_idx in range(1, _SCAN_POINTS):
        current = difference(ratios[lo_idx])
        if previous == 0.0:
            return ratios[lo_idx - 1]
        if previous * current < 0.0:
            lo, hi = ratios[lo_idx - 1], ratios[lo_idx]
            f_lo = previous
            while hi - lo > _BISECT_TOL:
                mid = 0.5 * (lo + hi)
                f_mid = difference(mid)
                if f_mid == 0.0:
                    return mid
                if f_lo * f_mid < 0.0:
                    hi = mid
                else:
                    lo, f_lo = mid, f_mid
            return 0.5 * (lo + hi)
        previous = current
    return None
