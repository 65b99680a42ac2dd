"""Interacting vertex-reinforced random walks on complete sub-graphs.

The package simulates m walks whose transition probabilities are
reinforced by their own occupation measures and coupled through
per-vertex interaction weights, enumerates and classifies the fixed
points of the one-step transition kernel, evaluates the associated
Lyapunov function, and produces predicted limit sets for the complete
graph, star and cycle families.
"""

from .errors import (
    DominanceViolation,
    DomainError,
    EmptyVertexSet,
    IllConditioned,
    MixedSigns,
    NoConvergence,
    NotApplicable,
    NotInterior,
    RegimeBoundary,
    SizeGuard,
    StepRejected,
    SymmetryViolation,
    ValidationError,
    VrrwError,
)
from .graph_model import (
    GraphSystem,
    ParameterSet,
    build_system,
    make_system,
    preset_complete,
    preset_cycle,
    preset_star,
    preset_star_preferences,
)
from .dynamics import (
    Trajectory,
    geometric_schedule,
    integrate_flow,
    overlap,
    sa_residual,
    simulate,
    step,
    transition_kernel,
    vector_field,
    weight,
)
from .fixed_points import (
    FixedPointComponent,
    accumulation_condition_check,
    build_linear_system,
    component_distance,
    disjoint_support_closed_form,
    enumerate_supports,
    fixed_point_set,
    genericity_check,
    project_to_component,
    solve_support,
    verify_fixed_point,
)
from .stability import (
    StabilityReport,
    boundary_ratio_test,
    candidates,
    classify,
    interior_instability_test,
    jacobian,
    spectrum,
)
from .lyapunov import (
    LyapunovEvaluation,
    descent_value,
    lyapunov_gradient,
    lyapunov_value,
    monotonicity_monitor,
)
from .case_studies import (
    EdgeWord,
    PredictedLimitSet,
    classify_cycle_point,
    complete_limits,
    cycle_edge_word,
    cycle_epsilon_degeneracy,
    empirical_limit,
    nearest_point,
    star_limits,
    star_pref_limits,
)
from .io import config_hash, load_trajectory, save_trajectory
from .acceptance import acceptance_suite

__version__ = "1.0.0"

__all__ = [
    "DominanceViolation",
    "DomainError",
    "EmptyVertexSet",
    "IllConditioned",
    "MixedSigns",
    "NoConvergence",
    "NotApplicable",
    "NotInterior",
    "RegimeBoundary",
    "SizeGuard",
    "StepRejected",
    "SymmetryViolation",
    "ValidationError",
    "VrrwError",
    "GraphSystem",
    "ParameterSet",
    "build_system",
    "make_system",
    "preset_complete",
    "preset_cycle",
    "preset_star",
    "preset_star_preferences",
    "Trajectory",
    "geometric_schedule",
    "integrate_flow",
    "overlap",
    "sa_residual",
    "simulate",
    "step",
    "transition_kernel",
    "vector_field",
    "weight",
    "FixedPointComponent",
    "accumulation_condition_check",
    "build_linear_system",
    "component_distance",
    "disjoint_support_closed_form",
    "enumerate_supports",
    "fixed_point_set",
    "genericity_check",
    "project_to_component",
    "solve_support",
    "verify_fixed_point",
    "StabilityReport",
    "boundary_ratio_test",
    "candidates",
    "classify",
    "interior_instability_test",
    "jacobian",
    "spectrum",
    "LyapunovEvaluation",
    "descent_value",
    "lyapunov_gradient",
    "lyapunov_value",
    "monotonicity_monitor",
    "EdgeWord",
    "PredictedLimitSet",
    "classify_cycle_point",
    "complete_limits",
    "cycle_edge_word",
    "cycle_epsilon_degeneracy",
    "empirical_limit",
    "nearest_point",
    "star_limits",
    "star_pref_limits",
    "config_hash",
    "load_trajectory",
    "save_trajectory",
    "acceptance_suite",
    "__version__",
]
