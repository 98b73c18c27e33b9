"""Ground states of the 2D coupled cubic NLS system with a delta
interaction at the origin: special functions, radial discretization,
energy model, variational solver, and parameter-space analysis."""

from .grid import Field, Grid, GridError, default_r_max, make_grid
from .model import (
    CoupledState,
    Decomposition,
    DegenerateRayError,
    DomainError,
    EnergyReport,
    Params,
    convert_lambda,
    energy,
    limit_energy,
    nehari_project,
    nehari_quotient,
)
from .phase import (
    Classification,
    ClassTols,
    PhaseError,
    SweepRow,
    asymptotic_check,
    beta_star,
    beta_zero,
    classify,
    regime_table,
    sweep_beta,
)
from .solver import (
    ConvergenceError,
    GroundState,
    Residuals,
    SolveOptions,
    default_grid,
    minimize_coupled,
    minimize_limit,
    minimize_scalar_point,
    minimize_scalar_regular,
    quotient_gradient,
)
from .specfun import bessel_k0, green_value, omega_alpha, theta

__version__ = "0.1.0"

__all__ = [
    "Field",
    "Grid",
    "GridError",
    "default_r_max",
    "make_grid",
    "CoupledState",
    "Decomposition",
    "DegenerateRayError",
    "DomainError",
    "EnergyReport",
    "Params",
    "convert_lambda",
    "energy",
    "limit_energy",
    "nehari_project",
    "nehari_quotient",
    "Classification",
    "ClassTols",
    "PhaseError",
    "SweepRow",
    "asymptotic_check",
    "beta_star",
    "beta_zero",
    "classify",
    "regime_table",
    "sweep_beta",
    "ConvergenceError",
    "GroundState",
    "Residuals",
    "SolveOptions",
    "default_grid",
    "minimize_coupled",
    "minimize_limit",
    "minimize_scalar_point",
    "minimize_scalar_regular",
    "quotient_gradient",
    "bessel_k0",
    "green_value",
    "omega_alpha",
    "theta",
    "__version__",
]
