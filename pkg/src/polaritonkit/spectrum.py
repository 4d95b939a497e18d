"""Polariton spectrum of the coupled matter-light quadratic form.

The center of mass and the cavity quadratures form a 2x2 problem whose
normal modes are the upper and lower polaritons.  Everything here is
closed form; the only care needed is numerical (cancellation in the
lower branch near an instability) and the decoupled limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .model import DECOUPLED_LAMBDA, ModelParams, derive

# Mixing-angle sentinel for the decoupled limit when the photon-like
# mode lies below the matter mode: Lambda -> -inf there, and this large
# negative stand-in keeps every downstream formula on the correct
# branch (Lambda^2 terms dominate completely).
MIXING_SENTINEL = -1e18

# Relative tolerance deciding that the decoupled modes are degenerate.
_RESONANCE_RTOL = 1e-12


@dataclass(frozen=True)
class PolaritonSpectrum:
    """Normal-mode data at one parameter point.

    omega_minus is only meaningful when stable; omega_minus_sq is always
    reported because its sign is the stability diagnostic.
    """

    omega_plus: float
    omega_minus_sq: float
    omega_minus: float | None
    mixing_lambda: float
    alpha: float
    stable: bool


def polariton_modes(params: ModelParams) -> PolaritonSpectrum:
    """Diagonalize the quadratic form at one parameter point.

    The upper branch comes from the trace-plus-discriminant half; the
    lower branch is evaluated through the determinant,
    omega_minus^2 = Omega^2 (omega_tilde^2 - omega_d^2) / omega_plus^2,
    which is exact algebraically and avoids the catastrophic
    cancellation of the direct difference near the instability onset.
    Without the quadratic field term the determinant factorizes as
    Omega^2 (omega - omega_d)(omega + omega_d), so the stability
    boundary lambda = sqrt(gamma2) is hit bit-exactly.
    """
    dv = derive(params)
    big_omega = params.omega_trap
    if params.lam < DECOUPLED_LAMBDA:
        return _decoupled_spectrum(big_omega, dv.omega_tilde)

    trace = dv.omega_tilde**2 + big_omega**2
    disc = math.hypot(2.0 * dv.omega_d * big_omega, dv.omega_tilde**2 - big_omega**2)
    omega_plus_sq = 0.5 * (trace + disc)
    omega_plus = math.sqrt(omega_plus_sq)

    if params.include_a2:
        det = (big_omega * dv.omega) ** 2
    else:
        det = big_omega**2 * (dv.omega - dv.omega_d) * (dv.omega + dv.omega_d)
    omega_minus_sq = det / omega_plus_sq

    alpha = (big_omega**2 - dv.omega_tilde**2) / (2.0 * dv.omega_d * big_omega)
    # Lambda = alpha - sqrt(1 + alpha^2), but that difference cancels
    # catastrophically for large positive alpha (weak coupling, red
    # detuning); the reciprocal form is the same number without the
    # cancellation, so Lambda stays accurate and strictly negative.
    if alpha > 0.0:
        mixing = -1.0 / (alpha + math.sqrt(1.0 + alpha * alpha))
    else:
        mixing = alpha - math.sqrt(1.0 + alpha * alpha)

    stable = omega_minus_sq > 0.0
    omega_minus = math.sqrt(omega_minus_sq) if stable else None
    return PolaritonSpectrum(
        omega_plus=omega_plus,
        omega_minus_sq=omega_minus_sq,
        omega_minus=omega_minus,
        mixing_lambda=mixing,
        alpha=alpha,
        stable=stable,
    )


def _decoupled_spectrum(big_omega: float, omega_tilde: float) -> PolaritonSpectrum:
    """Exact lambda -> 0 limit.

    The branches are the bare frequencies.  The mixing angle has three
    limits depending on which mode sits higher: Lambda -> 0 when the
    matter mode is the lower one (alpha -> +inf), Lambda -> -inf when
    the photon-like mode is the lower one (alpha -> -inf, represented by
    MIXING_SENTINEL), and Lambda -> -1 at exact degeneracy (alpha -> 0).
    """
    hi = max(big_omega, omega_tilde)
    lo = min(big_omega, omega_tilde)
    if abs(big_omega - omega_tilde) <= _RESONANCE_RTOL * big_omega:
        alpha, mixing = 0.0, -1.0
    elif big_omega > omega_tilde:
        alpha, mixing = math.inf, 0.0
    else:
        alpha, mixing = -math.inf, MIXING_SENTINEL
    return PolaritonSpectrum(
        omega_plus=hi,
        omega_minus_sq=lo * lo,
        omega_minus=lo,
        mixing_lambda=mixing,
        alpha=alpha,
        stable=True,
    )


def mixing_matrix(mixing_lambda: float) -> np.ndarray:
    """Orthogonal mode-mixing matrix [[1, L], [-L, 1]] / sqrt(1 + L^2)."""
    norm = math.sqrt(1.0 + mixing_lambda * mixing_lambda)
    return np.array(
        [[1.0, mixing_lambda], [-mixing_lambda, 1.0]], dtype=float
    ) / norm


def no_trap_limit(params: ModelParams) -> tuple[float, float]:
    """Branch frequencies as the trap is removed at fixed omega, omega_d.

    The upper branch tends to the dressed cavity frequency omega_tilde
    and the lower branch becomes the free center-of-mass motion at zero
    frequency.
    """
    dv = derive(params)
    return dv.omega_tilde, 0.0


def instability_onset(gamma2: float) -> float:
    """Critical coupling lambda* = sqrt(gamma2) without the quadratic term."""
    if not (gamma2 > 0.0) or not math.isfinite(gamma2):
        raise InvalidParameterError(f"gamma2 must be finite and > 0, got {gamma2}")
    return math.sqrt(gamma2)


@dataclass(frozen=True)
class FreeSpaceEigenvalue:
    """One eigenvalue of the untrapped model at fixed total momentum."""

    k_vector: tuple[float, float]
    occupations: tuple[int, int]
    energy: float


def free_space_energy(k_vector, n_x: int, n_y: int, params: ModelParams) -> FreeSpaceEigenvalue:
    """Exact eigenvalue at conserved center-of-mass momentum K.

    Two dressed photon polarizations at omega_tilde, each pulled down by
    the momentum-dependent coupling, plus the free kinetic term:

        E = omega_tilde (n_x + n_y + 1) - (g^2 / omega_tilde) K^2
            + hbar^2 K^2 / (2 m)

    The trap frequency only enters through the derived omega, omega_d.
    """
    if n_x < 0 or n_y < 0:
        raise InvalidParameterError("occupations must be non-negative integers")
    kx, ky = float(k_vector[0]), float(k_vector[1])
    dv = derive(params)
    k_sq = kx * kx + ky * ky
    energy = (
        dv.omega_tilde * (n_x + n_y + 1.0)
        - (dv.g**2 / dv.omega_tilde) * k_sq
        + 0.5 * k_sq
    )
    return FreeSpaceEigenvalue(k_vector=(kx, ky), occupations=(n_x, n_y), energy=energy)
