"""Conjugate gradient methods for cone-ordered vector optimization."""

from .cone import ConeOrder, cone_leq, h, nonneg_orthant, phi, polyhedral
from .directions import METHODS, compute_beta, direction_update
from .linesearch import (
    LineSearchParams,
    StepResult,
    armijo,
    verify_conditions,
    wolfe_standard,
    wolfe_strong,
)
from .problems import (
    EvalCounters,
    VectorProblem,
    evaluate_F,
    evaluate_J,
    get_problem,
    problem_names,
    suite,
)
from .solver import RunRecord, SolverOptions, solve
from .subproblem import SteepestResult, is_critical, steepest_direction

__all__ = [
    "ConeOrder", "cone_leq", "h", "nonneg_orthant", "phi", "polyhedral",
    "METHODS", "compute_beta", "direction_update",
    "LineSearchParams", "StepResult", "armijo", "verify_conditions",
    "wolfe_standard", "wolfe_strong",
    "EvalCounters", "VectorProblem", "evaluate_F", "evaluate_J",
    "get_problem", "problem_names", "suite",
    "RunRecord", "SolverOptions", "solve",
    "SteepestResult", "is_critical", "steepest_direction",
]

__version__ = "0.1.0"
