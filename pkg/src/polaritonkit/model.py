"""Model parameters and derived frequencies.

The model is N particles of mass m in a harmonic trap of frequency
omega_trap, all coupled to a single homogeneous cavity mode.  Everything
downstream is controlled by two dimensionless knobs: the collective
coupling strength lambda and the cavity detuning ratio gamma2, defined
so that the bare cavity frequency is omega = gamma2 * omega_trap.

Internally hbar = m = 1.  omega_trap is kept explicit so that scale
covariance can be checked rather than assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import InvalidParameterError

HBAR = 1.0
MASS = 1.0

# Couplings below this are treated as exactly zero; the matter-light
# block is then diagonal and the mixing angle is a pure limit.
DECOUPLED_LAMBDA = 1e-15


@dataclass(frozen=True)
class ModelParams:
    """Primary inputs.

    Attributes
    ----------
    lam : float
        Collective coupling strength lambda >= 0 (already includes the
        sqrt(N) enhancement).
    gamma2 : float
        Cavity-to-trap frequency ratio, > 0.
    omega_trap : float
        Trap frequency Omega, > 0.
    n_particles : int
        Particle number N >= 1.  Only the mean-field layer depends on it.
    include_a2 : bool
        Keep the quadratic field term.  Disabling it opens the
        superradiant instability.
    """

    lam: float = 1.0
    gamma2: float = 1.0
    omega_trap: float = 1.0
    n_particles: int = 1
    include_a2: bool = True

    def __post_init__(self):
        if not (self.lam >= 0.0) or not math.isfinite(self.lam):
            raise InvalidParameterError(f"lambda must be finite and >= 0, got {self.lam}")
        if not (self.gamma2 > 0.0) or not math.isfinite(self.gamma2):
            raise InvalidParameterError(f"gamma2 must be finite and > 0, got {self.gamma2}")
        if not (self.omega_trap > 0.0) or not math.isfinite(self.omega_trap):
            raise InvalidParameterError(
                f"omega_trap must be finite and > 0, got {self.omega_trap}"
            )
        if int(self.n_particles) != self.n_particles or self.n_particles < 1:
            raise InvalidParameterError(f"n_particles must be an integer >= 1, got {self.n_particles}")

    def replace(self, **kw) -> "ModelParams":
        return replace(self, **kw)


@dataclass(frozen=True)
class DerivedFrequencies:
    """Secondary frequencies implied by ModelParams.

    omega is the bare cavity frequency, omega_d the collective dipole
    coupling frequency, omega_tilde the cavity frequency dressed by the
    quadratic field term, and g the single-photon coupling in the
    dressed frame.
    """

    omega: float
    omega_d: float
    omega_tilde: float
    g: float


def derive(params: ModelParams) -> DerivedFrequencies:
    """Map (lambda, gamma2, Omega) to the internal frequency set.

    omega = gamma2 * Omega
    omega_d = lambda * sqrt(gamma2) * Omega
    omega_tilde = sqrt(omega^2 + omega_d^2) with the quadratic term,
                  omega otherwise
    g = omega_d * sqrt(hbar^3 / (2 m omega_tilde))
    """
    omega = params.gamma2 * params.omega_trap
    omega_d = params.lam * math.sqrt(params.gamma2) * params.omega_trap
    if params.include_a2:
        omega_tilde = math.hypot(omega, omega_d)
    else:
        omega_tilde = omega
    g = omega_d * math.sqrt(HBAR**3 / (2.0 * MASS * omega_tilde))
    return DerivedFrequencies(omega=omega, omega_d=omega_d, omega_tilde=omega_tilde, g=g)


def parse_value(key: str, raw: str):
    """Coerce one config/CLI string to the right type for ModelParams."""
    raw = raw.strip()
    if key in ("lambda", "lam", "gamma2", "omega_trap"):
        try:
            return float(raw)
        except ValueError as exc:
            raise InvalidParameterError(f"{key}: expected a number, got {raw!r}") from exc
    if key in ("n", "n_particles"):
        try:
            return int(raw)
        except ValueError as exc:
            raise InvalidParameterError(f"{key}: expected an integer, got {raw!r}") from exc
    if key == "include_a2":
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise InvalidParameterError(f"include_a2: expected a boolean, got {raw!r}")
    raise InvalidParameterError(f"unknown parameter {key!r}")


_KEY_ALIASES = {
    "lambda": "lam",
    "lam": "lam",
    "gamma2": "gamma2",
    "omega_trap": "omega_trap",
    "n": "n_particles",
    "n_particles": "n_particles",
    "include_a2": "include_a2",
}


def params_from_mapping(mapping: dict) -> ModelParams:
    """Build ModelParams from a str->str or str->value mapping.

    Unknown keys are rejected rather than ignored so that a typo in a
    config file cannot silently run the defaults.
    """
    kw = {}
    for key, value in mapping.items():
        field = _KEY_ALIASES.get(key)
        if field is None:
            raise InvalidParameterError(f"unknown parameter {key!r}")
        if isinstance(value, str):
            value = parse_value(key, value)
        kw[field] = value
    return ModelParams(**kw)


def load_config(path: str) -> dict:
    """Read a key = value config file.

    Blank lines and lines starting with '#' are skipped.  Values stay
    strings; params_from_mapping does the coercion.
    """
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise InvalidParameterError(
                    f"{path}:{lineno}: expected 'key = value', got {stripped!r}"
                )
            key, _, value = stripped.partition("=")
            out[key.strip()] = value.strip()
    return out
