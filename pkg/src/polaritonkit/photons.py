"""Ground-state photon statistics of the bare cavity mode.

The ground state is Gaussian, so everything reduces to the second
moments <a+ a> and <a a> of the bare-mode operator expanded in polariton
normal modes.  The quartic correlator has its own closed form, kept as
an independent expression so it can be checked against the Gaussian
factorization 2<a+ a>^2 + <a a>^2 rather than defined by it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DecouplingError, InstabilityError
from .model import DECOUPLED_LAMBDA, ModelParams, derive
from .spectrum import polariton_modes


@dataclass(frozen=True)
class PhotonStats:
    """Bare-mode moments at one parameter point.

    occupation = <a+ a>, two_point = <a a> (real, <= 0 in the ground
    state), four_point = <a+ a+ a a>, mandel_q = (var(n) - <n>) / <n>.
    """

    occupation: float
    two_point: float
    four_point: float
    mandel_q: float


def _moment_ingredients(params: ModelParams):
    spec = polariton_modes(params)
    if not spec.stable:
        raise InstabilityError(
            "photon statistics undefined below the instability "
            f"(omega_minus_sq = {spec.omega_minus_sq})"
        )
    omega = derive(params).omega
    lam_sq = spec.mixing_lambda**2
    x_minus = spec.omega_minus / omega
    x_plus = spec.omega_plus / omega
    return lam_sq, x_minus, x_plus


def photon_occupation(params: ModelParams) -> float:
    """Ground-state photon number of the bare cavity mode.

        <a+ a> = [ (w-/w + w/w- - 2) + L^2 (w+/w + w/w+ - 2) ]
                 / (4 + 4 L^2)

    with w the bare cavity frequency.  Exactly 0 at lambda = 0.
    """
    if params.lam < DECOUPLED_LAMBDA:
        return 0.0
    lam_sq, x_minus, x_plus = _moment_ingredients(params)
    term_minus = x_minus + 1.0 / x_minus - 2.0
    term_plus = x_plus + 1.0 / x_plus - 2.0
    return (term_minus + lam_sq * term_plus) / (4.0 + 4.0 * lam_sq)


def photon_two_point(params: ModelParams) -> float:
    """Anomalous moment <a a>, exactly 0 at lambda = 0.

        <a a> = [ (1/x- - x-) + L^2 (1/x+ - x+) ] / (4 + 4 L^2),
        x± = Omega_± / w.
    """
    if params.lam < DECOUPLED_LAMBDA:
        return 0.0
    lam_sq, x_minus, x_plus = _moment_ingredients(params)
    term_minus = 1.0 / x_minus - x_minus
    term_plus = 1.0 / x_plus - x_plus
    return (term_minus + lam_sq * term_plus) / (4.0 + 4.0 * lam_sq)


def photon_four_point(params: ModelParams) -> float:
    """Quartic correlator <a+ a+ a a> in closed form.

    Expanded in the normal modes the correlator collects six quartic
    contractions; the expression below is that expansion, not the Wick
    factorization, so agreement with 2 occ^2 + tp^2 is a real check.
    """
    if params.lam < DECOUPLED_LAMBDA:
        return 0.0
    lam_sq, x_minus, x_plus = _moment_ingredients(params)
    num = (
        2.0 * (x_minus - 1.0) ** 4 / x_minus**2
        + (x_minus**2 - 1.0) ** 2 / x_minus**2
        + 2.0 * lam_sq**2 * (x_plus - 1.0) ** 4 / x_plus**2
        + lam_sq**2 * (x_plus**2 - 1.0) ** 2 / x_plus**2
        + 2.0 * lam_sq * (x_minus**2 - 1.0) * (x_plus**2 - 1.0) / (x_plus * x_minus)
        + 4.0 * lam_sq * (x_plus - 1.0) ** 2 * (x_minus - 1.0) ** 2 / (x_plus * x_minus)
    )
    return num / (4.0 + 4.0 * lam_sq) ** 2


def mandel_q(params: ModelParams) -> float:
    """Mandel Q of the bare mode, Q = (var(n) - <n>) / <n>.

    For the Gaussian ground state Q = (occ^2 + tp^2) / occ > 0
    (super-Poissonian).  Undefined at zero coupling where occ = 0.
    """
    if params.lam < DECOUPLED_LAMBDA:
        raise DecouplingError("mandel_q undefined at lambda = 0 (occupation = 0)")
    occ = photon_occupation(params)
    tp = photon_two_point(params)
    return (occ * occ + tp * tp) / occ


def photon_stats(params: ModelParams) -> PhotonStats:
    """Bundle all four moments; raises at lambda = 0 like mandel_q."""
    return PhotonStats(
        occupation=photon_occupation(params),
        two_point=photon_two_point(params),
        four_point=photon_four_point(params),
        mandel_q=mandel_q(params),
    )
