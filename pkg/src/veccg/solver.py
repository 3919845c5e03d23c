"""Conjugate gradient driver for cone-ordered vector objectives.

One run is the loop: solve the direction subproblem, stop if critical,
build the CG direction from the chosen coefficient rule, find a
stepsize, advance.  Cross-iteration scalarization values are computed
from the cached previous Jacobian, so each iteration evaluates the
Jacobian only where its line search requires it.

Comparison coefficient rules (PRP, FR, ...) do not guarantee descent
directions; when one produces h(x, d) >= 0 the iteration restarts at
steepest descent and the restart is counted, not hidden.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .cone import ConeOrder, h as h_of, nonneg_orthant, phi
from .directions import (
    METHODS,
    ConfigurationError,
    DegenerateBetaError,
    DirectionState,
    compute_beta,
    direction_update,
)
from .linesearch import (
    LineSearchError,
    LineSearchParams,
    armijo,
    wolfe_standard,
    wolfe_strong,
)
from .problems import EvalCounters, EvaluationError, VectorProblem, evaluate_F, evaluate_J
from .subproblem import SubproblemError, is_critical, steepest_direction

CONVERGED = "CONVERGED"
MAX_ITERS = "MAX_ITERS"
LS_FAIL = "LS_FAIL"
SUBPROBLEM_FAIL = "SUBPROBLEM_FAIL"
DEGENERATE_BETA = "DEGENERATE_BETA"

LINESEARCHES = ("armijo", "wolfe", "strong-wolfe")

#: Stopping tolerance on theta: 5 * sqrt(machine epsilon).
DEFAULT_TOL_CRIT = 5.0 * np.sqrt(np.finfo(float).eps)

_LS_FUNCS = {"wolfe": wolfe_standard, "strong-wolfe": wolfe_strong}


@dataclass(frozen=True)
class SolverOptions:
    method: str = "mprp"
    linesearch: str = "wolfe"
    mu: float = 2.4
    max_iters: int = 5000
    tol_crit: float = DEFAULT_TOL_CRIT
    ls_params: LineSearchParams = field(default_factory=LineSearchParams)
    keep_trace: bool = True

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigurationError(f"unknown method {self.method!r}")
        if self.linesearch not in LINESEARCHES:
            raise ConfigurationError(f"unknown line search {self.linesearch!r}")
        if self.mu <= 2.0:
            raise ConfigurationError("mu must be > 2")
        if self.max_iters < 1 or self.tol_crit <= 0.0:
            raise ConfigurationError("max_iters >= 1 and tol_crit > 0 required")


@dataclass(frozen=True)
class TraceRow:
    """One iteration of the trace."""

    k: int
    v_norm: float
    theta: float
    h_v: float
    beta: float
    alpha: float
    h_d: float
    phi_decrease: float
    ls_trials: int


@dataclass
class RunRecord:
    """Everything one run produced: outcome, totals, optional trace."""

    status: str
    iters: int
    f_evals: int
    j_evals: int
    wall_time: float
    restarts: int
    trace: list[TraceRow] | None
    x_final: np.ndarray
    theta_final: float
    zoutendijk_sum: float = 0.0
    zoutendijk_last: float = float("inf")
    failure_reason: str = ""


def solve(p: VectorProblem, x0, opts: SolverOptions,
          cone: ConeOrder | None = None) -> RunRecord:
    """Run the CG iteration from x0 until criticality or failure."""
    if cone is None:
        cone = nonneg_orthant(p.m)
    counters = EvalCounters()
    t0 = time.perf_counter()
    x = np.asarray(x0, dtype=float).copy()
    trace: list[TraceRow] | None = [] if opts.keep_trace else None
    restarts = 0
    zsum = 0.0
    zlast = float("inf")

    def record(status, k, theta, reason=""):
        return RunRecord(status, k, counters.f_evals, counters.j_evals,
                         time.perf_counter() - t0, restarts, trace, x, theta,
                         zsum, zlast, reason)

    F_x = evaluate_F(p, x, counters)
    J_x = evaluate_J(p, x, counters)
    state: DirectionState | None = None
    alpha_prev = 1.0

    for k in range(opts.max_iters + 1):
        try:
            sd = steepest_direction(J_x, cone)
        except SubproblemError as err:
            return record(SUBPROBLEM_FAIL, k, float("nan"), str(err))
        if is_critical(sd.theta, opts.tol_crit):
            return record(CONVERGED, k, sd.theta)
        if k == opts.max_iters:
            return record(MAX_ITERS, k, sd.theta)

        beta = 0.0
        d = sd.v
        if state is not None:
            try:
                beta = compute_beta(
                    opts.method,
                    h_k_vk=sd.h_at_v,
                    h_km1_vk=h_of(state.J_prev, sd.v, cone),
                    h_k_dkm1=h_of(J_x, state.d_prev, cone),
                    h_km1_vkm1=state.h_prev_vprev,
                    h_km1_dkm1=state.h_prev_dprev,
                    mu=opts.mu,
                )
                d = direction_update(sd.v, beta, state.d_prev)
            except DegenerateBetaError:
                restarts += 1
                beta = 0.0
        h_xd = h_of(J_x, d, cone) if beta != 0.0 else sd.h_at_v
        if h_xd >= 0.0:
            # Non-descent direction from a comparison rule: restart at
            # steepest descent.
            restarts += 1
            beta = 0.0
            d = sd.v
            h_xd = sd.h_at_v

        try:
            if opts.linesearch == "armijo":
                step = armijo(p, cone, x, F_x, d, h_xd, opts.ls_params, counters)
                J_new = evaluate_J(p, x + step.alpha * d, counters)
            else:
                step = _LS_FUNCS[opts.linesearch](
                    p, cone, x, F_x, J_x, d, h_xd, opts.ls_params, counters,
                    alpha_init=alpha_prev)
                J_new = step.J_new
            alpha_prev = step.alpha
        except (LineSearchError, EvaluationError, OverflowError) as err:
            return record(LS_FAIL, k, sd.theta, str(err))

        zlast = h_xd ** 2 / float(d @ d)
        zsum += zlast
        if trace is not None:
            trace.append(TraceRow(
                k, float(np.linalg.norm(sd.v)), sd.theta, sd.h_at_v, beta,
                step.alpha, h_xd, phi(step.F_new - F_x, cone), step.trials))

        state = DirectionState(d_prev=d, J_prev=J_x,
                               h_prev_vprev=sd.h_at_v, h_prev_dprev=h_xd)
        x = x + step.alpha * d
        F_x = step.F_new
        J_x = J_new

    raise AssertionError("unreachable")
