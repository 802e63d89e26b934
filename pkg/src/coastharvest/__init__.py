"""Optimal harvesting policies for a coastline fishery with diffusion.

The package decides, from closed-form optimality conditions, whether a
finite coastline supports a centered no-take reserve, places it, and
cross-checks the answer with independent numerics: two-sided shooting
for the steady state and adjoint, brute-force policy enumeration, an
event-detecting integrator for the switching structure, an implicit
parabolic solver, and a spectral stability check.
"""

from .analytic import (
    SegmentSolution,
    adjoint_constant_hbar,
    adjoint_return_time_q_le_1,
    constant_control_objective,
    constant_control_steady_state,
    optimal_shoot_slope,
    state_return_time,
    switch_level,
)
from .bvp import (
    AdjointProfile,
    StateProfile,
    evaluate_objective,
    hamiltonian_diagnostic,
    propagate_segment,
    shoot_steady_state,
    solve_adjoint,
)
from .lab import (
    PdeRun,
    SweepResult,
    brute_force_bangbang,
    integrate_adjoint_with_events,
    pde_time_stepper,
    reserve_sweep,
    stability_eigenvalues,
)
from .params import (
    ParameterError,
    ScaledParams,
    UnscaledParams,
    to_scaled,
    to_unscaled_length,
    unscale_objective,
)
from .policy import HarvestPolicy, cell_policy, constant_policy, single_reserve_policy
from .switching import (
    DerivedConstants,
    SaddleGeometry,
    derive_constants,
    hitting_time,
    min_length,
    monotonicity_witness,
    post_switch_time,
    saddle_geometry,
    solve_lambda_bar,
    switch_line_intercept,
    switch_location,
    switch_time,
)
from .synthesis import (
    IndeterminateError,
    OptimalSolution,
    SolutionDiagnostics,
    extend_by_symmetry,
    half_length_domain,
    half_length_function,
    neumann_objective,
    neumann_variant_policy,
    optimal_policy,
    unscaled_min_length,
    unscaled_reserve_boundary,
)

__version__ = "0.1.0"

__all__ = [
    "AdjointProfile",
    "DerivedConstants",
    "HarvestPolicy",
    "IndeterminateError",
    "OptimalSolution",
    "ParameterError",
    "PdeRun",
    "SaddleGeometry",
    "ScaledParams",
    "SegmentSolution",
    "SolutionDiagnostics",
    "StateProfile",
    "SweepResult",
    "UnscaledParams",
    "adjoint_constant_hbar",
    "adjoint_return_time_q_le_1",
    "brute_force_bangbang",
    "cell_policy",
    "constant_control_objective",
    "constant_control_steady_state",
    "constant_policy",
    "derive_constants",
    "evaluate_objective",
    "extend_by_symmetry",
    "half_length_domain",
    "half_length_function",
    "hamiltonian_diagnostic",
    "hitting_time",
    "integrate_adjoint_with_events",
    "min_length",
    "monotonicity_witness",
    "neumann_objective",
    "neumann_variant_policy",
    "optimal_policy",
    "optimal_shoot_slope",
    "pde_time_stepper",
    "post_switch_time",
    "propagate_segment",
    "reserve_sweep",
    "saddle_geometry",
    "shoot_steady_state",
    "single_reserve_policy",
    "solve_adjoint",
    "solve_lambda_bar",
    "stability_eigenvalues",
    "state_return_time",
    "switch_level",
    "switch_line_intercept",
    "switch_location",
    "switch_time",
    "to_scaled",
    "to_unscaled_length",
    "unscale_objective",
    "unscaled_min_length",
    "unscaled_reserve_boundary",
]
