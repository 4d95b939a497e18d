"""Exactly solvable model of trapped particles collectively coupled to
a single homogeneous cavity mode: polariton spectra, ground-state
observables, photon statistics, a numerically exact Fock-space check,
magnetic-field response, and a mean-field solver for the N-particle
density."""

__version__ = "0.1.0"

from .bfield import BFieldSpectrum, bfield_spectrum, critical_field, landau_zener
from .errors import (
    DecouplingError,
    DegenerateFitError,
    InstabilityError,
    InvalidParameterError,
    NonConvergenceError,
    OracleError,
    PolaritonkitError,
    UnconvergedStateError,
)
from .fock import FockGroundState, build_and_diagonalize, measure
from .meanfield import (
    DensityGrid,
    EffectivePotentialSpec,
    GridSpec,
    MeanFieldSolution,
    ParamsFamily,
    ScalingFit,
    SolverConfig,
    density_difference,
    mean_field_ground_state,
    scaling_exponent,
    solve_ground_state,
)
from .model import DerivedFrequencies, ModelParams, derive
from .observables import (
    CmDensityProfile,
    DensityGridSpec,
    EffectiveMassResult,
    ResonanceArgmax,
    cm_density,
    cm_variances,
    effective_mass,
    resonance_argmax,
)
from .photons import (
    PhotonStats,
    mandel_q,
    photon_four_point,
    photon_occupation,
    photon_stats,
    photon_two_point,
)
from .spectrum import (
    FreeSpaceEigenvalue,
    PolaritonSpectrum,
    free_space_energy,
    instability_onset,
    mixing_matrix,
    no_trap_limit,
    polariton_modes,
)

__all__ = [
    "__version__",
    "BFieldSpectrum",
    "CmDensityProfile",
    "DecouplingError",
    "DegenerateFitError",
    "DensityGrid",
    "DensityGridSpec",
    "DerivedFrequencies",
    "EffectiveMassResult",
    "EffectivePotentialSpec",
    "FockGroundState",
    "FreeSpaceEigenvalue",
    "GridSpec",
    "InstabilityError",
    "InvalidParameterError",
    "MeanFieldSolution",
    "ModelParams",
    "NonConvergenceError",
    "OracleError",
    "ParamsFamily",
    "PhotonStats",
    "PolaritonSpectrum",
    "PolaritonkitError",
    "ResonanceArgmax",
    "ScalingFit",
    "SolverConfig",
    "UnconvergedStateError",
    "bfield_spectrum",
    "build_and_diagonalize",
    "cm_density",
    "cm_variances",
    "critical_field",
    "density_difference",
    "derive",
    "effective_mass",
    "free_space_energy",
    "instability_onset",
    "landau_zener",
    "mandel_q",
    "mean_field_ground_state",
    "measure",
    "mixing_matrix",
    "no_trap_limit",
    "photon_four_point",
    "photon_occupation",
    "photon_stats",
    "photon_two_point",
    "polariton_modes",
    "resonance_argmax",
    "scaling_exponent",
    "solve_ground_state",
]
