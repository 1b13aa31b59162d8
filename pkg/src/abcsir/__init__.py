"""Optimal vaccination control of a fractional-time SIR reaction-diffusion model.

The time derivative carries a non-singular Mittag-Leffler memory kernel, so
the epidemic dynamics remembers its full history. The package provides the
kernel special functions, the discrete fractional operators built on exact
per-interval kernel integrals, an explicit forward marcher for the state
system, the reversed-time adjoint solve, and a projected forward-backward
sweep optimizer, plus a small CLI for scenario runs.
"""

__version__ = "0.1.0"

from .adjoint import solve_adjoint
from .config import (
    ALPHA_ONE_SURROGATE,
    FBSSettings,
    InitialOverride,
    OutputSettings,
    ScenarioConfig,
    SolverGuards,
    config_to_dict,
    config_to_json,
    load_config,
)
from .errors import (
    AccuracyError,
    ConfigError,
    DomainError,
    InstabilityError,
    PositivityBudgetError,
)
from .forward import fractional_stiffness_ratio, solve_forward, step_forward
from .fracops import (
    FractionalSetup,
    ab_integral,
    abc_derivative,
    abc_derivative_backward,
    abc_linear_ode_solution,
    duality_residual,
    kernel_weights,
)
from .model import (
    ModelParams,
    SIRState,
    observation_matrix,
    reaction_jacobian,
    reaction_terms,
    vaccination_direction,
)
from .optimize import (
    ObjectiveValue,
    adjoint_gradient,
    convergence_test,
    evaluate_objective,
    forward_backward_sweep,
    gradient_check,
    project_control,
    random_smooth_direction,
)
from .spatial import (
    Field,
    Grid2D,
    integrate_field,
    integrate_field_squared,
    laplacian_neumann,
)
from .special import gamma, mittag_leffler, mittag_leffler_many
from .trajectories import (
    AdjointTrajectory,
    ControlTrajectory,
    StateTrajectory,
    SweepIterate,
    SweepReport,
)

__all__ = [
    "ALPHA_ONE_SURROGATE",
    "AccuracyError",
    "AdjointTrajectory",
    "ConfigError",
    "ControlTrajectory",
    "DomainError",
    "FBSSettings",
    "Field",
    "FractionalSetup",
    "Grid2D",
    "InitialOverride",
    "InstabilityError",
    "ModelParams",
    "ObjectiveValue",
    "OutputSettings",
    "PositivityBudgetError",
    "SIRState",
    "ScenarioConfig",
    "SolverGuards",
    "StateTrajectory",
    "SweepIterate",
    "SweepReport",
    "ab_integral",
    "abc_derivative",
    "abc_derivative_backward",
    "abc_linear_ode_solution",
    "adjoint_gradient",
    "config_to_dict",
    "config_to_json",
    "convergence_test",
    "duality_residual",
    "evaluate_objective",
    "forward_backward_sweep",
    "fractional_stiffness_ratio",
    "gamma",
    "gradient_check",
    "integrate_field",
    "integrate_field_squared",
    "kernel_weights",
    "laplacian_neumann",
    "load_config",
    "mittag_leffler",
    "mittag_leffler_many",
    "observation_matrix",
    "project_control",
    "random_smooth_direction",
    "reaction_jacobian",
    "reaction_terms",
    "solve_adjoint",
    "solve_forward",
    "step_forward",
    "vaccination_direction",
]
