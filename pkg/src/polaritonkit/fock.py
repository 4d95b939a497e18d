"""Numerically exact ground state in a truncated Fock basis.

Independent check on the closed-form route: the coupled center-of-mass
plus dressed-photon Hamiltonian is assembled in a product Fock basis,
the ground state is found by a dense symmetric eigensolve, and bare-mode
expectation values are computed from the state vector.  Nothing here
reuses the normal-mode formulas.

The bilinear coupling (b_m + b_m+)(b_p + b_p+) changes both occupations
by one, so total parity is conserved and the ground state lives in the
even-total-quanta sector.  The solve is restricted to that block, which
quarters the dense workload without changing the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .errors import OracleError, UnconvergedStateError
from .model import HBAR, MASS, ModelParams, derive

# Certification grows the cutoff by 1.5x (rounded to a multiple of 10)
# until successive ground energies agree to this absolute tolerance.
ENERGY_TOL = 1e-10
N_CUT_MAX = 160

_OBSERVABLES = ("occupation", "two_point", "four_point", "x_variance", "p_variance")


@dataclass(frozen=True)
class FockGroundState:
    """Ground state of the truncated two-mode problem.

    amplitudes is the real state vector over the full product basis
    |n_matter> x |n_photon>, row-major with the photon index fastest.
    converged means the truncation certification passed; expectation
    values refuse to run on uncertified states.
    """

    params: ModelParams
    n_cut: int
    energy: float
    amplitudes: np.ndarray
    converged: bool


def _ladder(n_states: int) -> sp.spmatrix:
    """Annihilation operator on a cutoff Fock space (n_states levels)."""
    return sp.diags(np.sqrt(np.arange(1.0, n_states)), 1, format="csr")


def _hamiltonian(params: ModelParams, n_cut: int) -> sp.spmatrix:
    """Two-mode Hamiltonian on the product basis, photon index fastest.

    H = Omega (n_m + 1/2) + omega_tilde (n_p + 1/2)
        + (omega_d / 2) sqrt(Omega / omega_tilde) (b_m + b_m+)(b_p + b_p+)
    """
    dv = derive(params)
    n_states = n_cut + 1
    eye = sp.identity(n_states, format="csr")
    b = _ladder(n_states)
    num = sp.diags(np.arange(n_states, dtype=float), 0, format="csr")
    x_like = b + b.T
    coupling = 0.5 * dv.omega_d * math.sqrt(params.omega_trap / dv.omega_tilde)
    h = (
        params.omega_trap * sp.kron(num + 0.5 * eye, eye)
        + dv.omega_tilde * sp.kron(eye, num + 0.5 * eye)
        + coupling * sp.kron(x_like, x_like)
    )
    return h.tocsr()


def _even_indices(n_states: int) -> np.ndarray:
    """Flat indices of the even-total-quanta product states."""
    n = np.arange(n_states)
    return np.flatnonzero((np.add.outer(n, n) % 2 == 0).ravel())


def _solve_once(params: ModelParams, n_cut: int) -> tuple[float, np.ndarray]:
    n_states = n_cut + 1
    h = _hamiltonian(params, n_cut)
    idx = _even_indices(n_states)
    block = h[idx][:, idx].toarray()
    try:
        vals, vecs = sla.eigh(block, subset_by_index=[0, 0], driver="evr")
    except sla.LinAlgError as exc:
        raise OracleError(f"dense eigensolve failed at n_cut={n_cut}: {exc}") from exc
    full = np.zeros(n_states * n_states)
    full[idx] = vecs[:, 0]
    # Fix the overall sign so amplitudes are reproducible run to run.
    pivot = np.argmax(np.abs(full))
    if full[pivot] < 0.0:
        full = -full
    return float(vals[0]), full


def _next_cut(n_cut: int) -> int:
    grown = int(math.ceil(1.5 * n_cut / 10.0)) * 10
    return min(max(grown, n_cut + 10), N_CUT_MAX)


def build_and_diagonalize(
    params: ModelParams,
    n_cut: int = 40,
    energy_tol: float = ENERGY_TOL,
    certify: bool = True,
) -> FockGroundState:
    """Ground state with truncation certification.

    The cutoff grows geometrically until two successive ground energies
    agree to energy_tol (absolute); the state at the larger cutoff is
    returned.  If the cap is reached without agreement the state comes
    back with converged=False rather than raising, so the caller can
    still inspect the energy trend.

    certify=False performs a single solve at the given cutoff and marks
    the state unconverged; useful for variational cutoff scans.
    """
    energy, amplitudes = _solve_once(params, n_cut)
    if not certify:
        return FockGroundState(params, n_cut, energy, amplitudes, converged=False)
    while True:
        if n_cut >= N_CUT_MAX:
            return FockGroundState(params, n_cut, energy, amplitudes, converged=False)
        n_next = _next_cut(n_cut)
        energy_next, amplitudes_next = _solve_once(params, n_next)
        if abs(energy_next - energy) < energy_tol:
            return FockGroundState(params, n_next, energy_next, amplitudes_next, converged=True)
        n_cut, energy, amplitudes = n_next, energy_next, amplitudes_next


def _bare_mode(params: ModelParams, n_states: int) -> sp.spmatrix:
    """Bare-cavity annihilation operator on the product basis.

    The diagonal basis uses the dressed mode; undoing the squeeze gives
    a = -(cosh(u) b_p - sinh(u) b_p+) with
    cosh(u) = (omega_tilde + omega) / (2 sqrt(omega omega_tilde)).
    """
    dv = derive(params)
    ch = (dv.omega_tilde + dv.omega) / (2.0 * math.sqrt(dv.omega * dv.omega_tilde))
    sh = (dv.omega_tilde - dv.omega) / (2.0 * math.sqrt(dv.omega * dv.omega_tilde))
    eye = sp.identity(n_states, format="csr")
    b = _ladder(n_states)
    return sp.kron(eye, -(ch * b - sh * b.T)).tocsr()


def measure(state: FockGroundState, observable: str) -> float:
    """Expectation value of a named observable in the certified state.

    observable is one of occupation, two_point, four_point (bare cavity
    mode) or x_variance, p_variance (center of mass).
    """
    if observable not in _OBSERVABLES:
        raise ValueError(f"unknown observable {observable!r}; expected one of {_OBSERVABLES}")
    if not state.converged:
        raise UnconvergedStateError(
            f"state at n_cut={state.n_cut} failed certification; refusing to measure"
        )
    n_states = state.n_cut + 1
    psi = state.amplitudes
    if observable in ("occupation", "two_point", "four_point"):
        a = _bare_mode(state.params, n_states)
        a_psi = a @ psi
        if observable == "occupation":
            return float(a_psi @ a_psi)
        aa_psi = a @ a_psi
        if observable == "two_point":
            return float(psi @ aa_psi)
        return float(aa_psi @ aa_psi)
    # Center-of-mass quadratures; <X> = <P> = 0 by parity, so the
    # variance is the plain second moment.
    big_omega = state.params.omega_trap
    eye = sp.identity(n_states, format="csr")
    b = _ladder(n_states)
    if observable == "x_variance":
        d_psi = sp.kron(b - b.T, eye).tocsr() @ psi
        return float(HBAR / (2.0 * MASS * big_omega) * (d_psi @ d_psi))
    s_psi = sp.kron(b + b.T, eye).tocsr() @ psi
    return float(MASS * HBAR * big_omega / 2.0 * (s_psi @ s_psi))
