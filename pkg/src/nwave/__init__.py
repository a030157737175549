"""Two-solver simulator for sonic-boom N-wave propagation through
randomly inhomogeneous media."""

__version__ = "0.1.0"

from .errors import (BudgetExceededError, CflViolationError, ConfigError,
                     InstabilityError)
from .grid import (DomainConfig, Field2D, SpectralField2D, build_axes,
                   extract_region, l2_norm, relative_error, rho_nodes_closed,
                   to_physical, to_spectral)
from .turbulence import (TurbulenceParams, TurbulenceSpec, VelocityFields,
                         downsample_fields, energy_spectrum, evaluate_fields,
                         sample_modes, zero_fields)
from .weno import weno5_b
from .exprk import (PhiMultipliers, build_multipliers, exp_euler_step,
                    exprk22_step, phi1, phi2, run_exprk22)
from .splitting import (CflReport, SplittingState, check_cfl_splitting,
                        godunov_flux, lie_step, run_splitting,
                        step_axial_absorption_spectral, step_burgers_godunov,
                        step_diffraction_cn, step_transverse_lw)
from .analysis import (ConvergenceRow, TimingReport, compare_solvers,
                       convergence_rate, convergence_study, cost_scaling_study,
                       initial_nwave, max_overshoot, preset_config)
from .reports import RunReport

__all__ = [
    "BudgetExceededError", "CflViolationError", "ConfigError",
    "InstabilityError", "DomainConfig", "Field2D", "SpectralField2D",
    "build_axes", "extract_region", "l2_norm", "relative_error",
    "rho_nodes_closed", "to_physical", "to_spectral", "TurbulenceParams",
    "TurbulenceSpec", "VelocityFields", "downsample_fields",
    "energy_spectrum", "evaluate_fields", "sample_modes", "zero_fields",
    "weno5_b", "PhiMultipliers", "build_multipliers", "exp_euler_step",
    "exprk22_step", "phi1", "phi2", "run_exprk22", "CflReport",
    "SplittingState", "check_cfl_splitting", "godunov_flux", "lie_step",
    "run_splitting", "step_axial_absorption_spectral",
    "step_burgers_godunov", "step_diffraction_cn", "step_transverse_lw",
    "ConvergenceRow", "TimingReport", "compare_solvers", "convergence_rate",
    "convergence_study", "cost_scaling_study", "initial_nwave",
    "max_overshoot", "preset_config", "RunReport",
]
