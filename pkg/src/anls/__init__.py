"""Spectral toolkit for the 2D anisotropic fourth-order Schroedinger model

    i psi_t + psi_xx - psi_yyyy + |psi|^(p-2) psi = 0,

covering standing-wave profiles, the sharp anisotropic interpolation
constant, splitting time integration with blowup detection, virial and
sign-invariance diagnostics, the resolvent kernel's anisotropic decay, and a
reproducible experiment CLI.
"""

from .errors import (
    AccuracyError,
    BoundaryMassWarning,
    DomainError,
    InsufficientDataError,
    NotConvergedError,
    SolverDivergedError,
    SupportOverflowError,
)
from .evolution import (
    DiagnosticsRecord,
    EvolveConfig,
    TrajectoryOutcome,
    classify_initial_datum,
    evolve,
    orbit_distance,
    orbital_stability_probe,
    sign_invariance_probe,
    step_lie,
    step_strang,
    virial_check,
)
from .experiments import EXPERIMENTS, RunConfig, run
from .fields import band_limited_noise, gaussian, random_smooth_field
from .functionals import (
    FunctionalValues,
    PohozaevRatios,
    boundary_mass_fraction,
    energy,
    functional_values,
    gn_quotient,
    h12_norm,
    i_omega,
    j_omega,
    k_functional,
    lp_norm_p,
    mass,
    pohozaev_ratios,
    q_functional,
    rescale_omega,
    scale_aniso,
    scale_lambda,
    scale_ylambda,
    transverse_virial,
    virial_flux,
)
from .grid import Field, Grid2D, ModelParams, zeros
from .ground_state import (
    GroundStateResult,
    SymmetryReport,
    center_peak,
    fourier_rearrange,
    gn_constant,
    gn_constant_from_ground_state,
    gn_quotient_maximize,
    gradient_flow_solve,
    mass_critical_threshold,
    minimal_action,
    petviashvili_multistart,
    petviashvili_solve,
    symmetry_report,
)
from .kernel import (
    DecayFit,
    H2Asymptotics,
    decay_fit,
    h2_asymptotics,
    h2_profile,
    kernel_eval,
    kernel_ray,
    line_decay_fit,
)
from .snapshots import read_snapshot, write_csv, write_snapshot
from .spectral import (
    dispersion_symbol,
    dx,
    dyy,
    fft2,
    ifft2,
    linear_propagate,
    nonlinear_term,
    resample_to_grid,
    sample_scaled,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "BoundaryMassWarning",
    "DecayFit",
    "DiagnosticsRecord",
    "DomainError",
    "EXPERIMENTS",
    "EvolveConfig",
    "Field",
    "FunctionalValues",
    "Grid2D",
    "GroundStateResult",
    "H2Asymptotics",
    "InsufficientDataError",
    "ModelParams",
    "NotConvergedError",
    "PohozaevRatios",
    "RunConfig",
    "SolverDivergedError",
    "SupportOverflowError",
    "SymmetryReport",
    "TrajectoryOutcome",
    "band_limited_noise",
    "boundary_mass_fraction",
    "center_peak",
    "classify_initial_datum",
    "decay_fit",
    "dispersion_symbol",
    "dx",
    "dyy",
    "energy",
    "evolve",
    "fft2",
    "fourier_rearrange",
    "functional_values",
    "gaussian",
    "gn_constant",
    "gn_constant_from_ground_state",
    "gn_quotient",
    "gn_quotient_maximize",
    "gradient_flow_solve",
    "h12_norm",
    "h2_asymptotics",
    "h2_profile",
    "i_omega",
    "ifft2",
    "j_omega",
    "k_functional",
    "kernel_eval",
    "kernel_ray",
    "line_decay_fit",
    "linear_propagate",
    "lp_norm_p",
    "mass",
    "mass_critical_threshold",
    "minimal_action",
    "nonlinear_term",
    "orbit_distance",
    "orbital_stability_probe",
    "petviashvili_multistart",
    "petviashvili_solve",
    "pohozaev_ratios",
    "q_functional",
    "random_smooth_field",
    "read_snapshot",
    "rescale_omega",
    "resample_to_grid",
    "run",
    "sample_scaled",
    "scale_aniso",
    "scale_lambda",
    "scale_ylambda",
    "sign_invariance_probe",
    "step_lie",
    "step_strang",
    "symmetry_report",
    "transverse_virial",
    "virial_check",
    "virial_flux",
    "write_csv",
    "write_snapshot",
    "zeros",
]
