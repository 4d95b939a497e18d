"""Exception types shared across the package.

Every failure mode that a caller can reasonably branch on gets its own
class.  Anything else propagates as the underlying exception.
"""


class PolaritonkitError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(PolaritonkitError):
    """A parameter violates its documented domain (e.g. gamma2 <= 0)."""


class InstabilityError(PolaritonkitError):
    """An observable was requested for a parameter point where the lower
    mode has collapsed (omega_minus_sq <= 0, only possible without the
    quadratic field term)."""


class DecouplingError(PolaritonkitError):
    """A quantity that is undefined at zero light-matter coupling was
    requested at lambda = 0 (e.g. the Mandel Q parameter, which divides
    by the photon occupation)."""


class UnconvergedStateError(PolaritonkitError):
    """A numerically exact ground state failed its truncation
    certification and may not be trusted for expectation values."""


class OracleError(PolaritonkitError):
    """The dense eigensolver backing the numerically exact route failed."""


class NonConvergenceError(PolaritonkitError):
    """The imaginary-time solver exhausted its step budget.

    Carries the last energy and wavefunction residuals so the caller can
    decide whether to retry with a larger budget.
    """

    def __init__(self, message, energy_residual=None, psi_residual=None, steps=None):
        super().__init__(message)
        self.energy_residual = energy_residual
        self.psi_residual = psi_residual
        self.steps = steps


class DegenerateFitError(PolaritonkitError):
    """A scaling fit had no usable points (all central density
    differences non-positive)."""
