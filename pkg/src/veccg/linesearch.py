"""Stepsize strategies: Armijo backtracking, standard and strong Wolfe.

All three accept a step through the cone-valued sufficient decrease
inequality

    F(x + a d)  <=_K  F(x) + rho * a * h(x, d) * e,

with e the cone's interior direction.  The Wolfe variants add a
curvature bound on h(x + a d, d): one-sided for the standard form,
absolute-value for the strong form.  Existence of acceptable steps needs
F bounded below along d; when that fails the search reports failure
rather than returning a zero step.

Armijo evaluates only the objective; each Wolfe trial evaluates the
objective and the Jacobian (the curvature test is a derivative test),
and the accepted trial's Jacobian is returned so the solver never
re-evaluates it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cone import ConeOrder, cone_leq, h
from .problems import EvalCounters, VectorProblem, evaluate_F, evaluate_J


class LineSearchError(RuntimeError):
    """No acceptable stepsize found within the trial budget."""


@dataclass(frozen=True)
class LineSearchParams:
    """Constants shared by the stepsize searches.

    rho < sigma as required by the Wolfe conditions; delta is the
    Armijo backtracking factor.
    """

    rho: float = 1e-4
    sigma: float = 0.1
    delta: float = 0.5
    alpha_max: float = 1e6
    max_trials: int = 100

    def __post_init__(self):
        if not (0.0 < self.rho < self.sigma < 1.0):
            raise ValueError("need 0 < rho < sigma < 1")
        if not (0.0 < self.delta < 1.0):
            raise ValueError("need 0 < delta < 1")
        if self.alpha_max <= 0 or self.max_trials < 1:
            raise ValueError("alpha_max > 0 and max_trials >= 1 required")


@dataclass(frozen=True)
class StepResult:
    """An accepted stepsize with the values computed at x + alpha d.

    J_new is None for Armijo, which never touches derivatives.
    """

    alpha: float
    F_new: np.ndarray
    J_new: np.ndarray | None
    trials: int


def _suff_decrease(F_trial, F_x, alpha, h_xd, rho, cone) -> bool:
    return cone_leq(F_trial, F_x + rho * alpha * h_xd * cone.e, cone)


def armijo(p: VectorProblem, cone: ConeOrder, x, F_x, d, h_xd,
           params: LineSearchParams, counters: EvalCounters) -> StepResult:
    """Backtracking from the fixed trial ladder tau, delta*tau, ...

    tau = -h(x, d) / ||d||^2, as the Armijo rule for vector objectives
    prescribes; it is deliberately not clamped to 1.
    """
    d = np.asarray(d, dtype=float)
    if h_xd >= 0.0:
        raise LineSearchError("Armijo requires a descent direction (h < 0)")
    tau = -h_xd / float(d @ d)
    alpha = tau
    for trial in range(1, params.max_trials + 1):
        F_trial = evaluate_F(p, x + alpha * d, counters)
        if _suff_decrease(F_trial, F_x, alpha, h_xd, params.rho, cone):
            return StepResult(alpha, F_trial, None, trial)
        alpha *= params.delta
    raise LineSearchError(
        f"Armijo exhausted {params.max_trials} trials from tau={tau:.3e}")


def _wolfe(p, cone, x, F_x, d, h_xd, params, counters, strong,
           alpha_init=1.0) -> StepResult:
    if h_xd >= 0.0:
        raise LineSearchError("Wolfe search requires a descent direction (h < 0)")
    d = np.asarray(d, dtype=float)
    rho, sigma = params.rho, params.sigma
    curvature_floor = sigma * h_xd          # h_new must be >= this
    curvature_ceil = -sigma * h_xd          # and <= this when strong

    def probe(alpha):
        F_t = evaluate_F(p, x + alpha * d, counters)
        J_t = evaluate_J(p, x + alpha * d, counters)
        return F_t, J_t, h(J_t, d, cone)

    trials = 0
    lo = 0.0
    alpha = min(max(alpha_init, 1e-12), params.alpha_max)
    # Expansion: grow alpha until sufficient decrease fails or the
    # curvature floor is reached, keeping lo at the best decrease point
    # whose slope is still too negative.
    while trials < params.max_trials:
        F_t, J_t, h_t = probe(alpha)
        trials += 1
        if not _suff_decrease(F_t, F_x, alpha, h_xd, rho, cone):
            hi = alpha
            break
        if h_t >= curvature_floor:
            if not strong or h_t <= curvature_ceil:
                return StepResult(alpha, F_t, J_t, trials)
            hi = alpha  # slope overshot the strong band
            break
        lo = alpha
        alpha *= 2.0
        if alpha > params.alpha_max:
            raise LineSearchError(
                "sufficient decrease holds but curvature never does up to "
                f"alpha_max={params.alpha_max:g}; F looks unbounded below "
                "along the search direction")
    else:
        raise LineSearchError(f"Wolfe expansion exhausted {params.max_trials} trials")

    # Bisection zoom.  Invariants: at lo sufficient decrease holds and
    # the slope is below the curvature floor; hi either violates
    # sufficient decrease or (strong case) overshoots the band.
    while trials < params.max_trials:
        mid = 0.5 * (lo + hi)
        F_t, J_t, h_t = probe(mid)
        trials += 1
        if not _suff_decrease(F_t, F_x, mid, h_xd, rho, cone):
            hi = mid
        elif h_t < curvature_floor:
            lo = mid
        elif strong and h_t > curvature_ceil:
            hi = mid
        else:
            return StepResult(mid, F_t, J_t, trials)
    raise LineSearchError(
        f"Wolfe zoom exhausted {params.max_trials} trials in "
        f"[{lo:.3e}, {hi:.3e}]")


def wolfe_standard(p, cone, x, F_x, J_x, d, h_xd, params, counters,
                   alpha_init=1.0) -> StepResult:
    """Sufficient decrease plus the one-sided curvature bound.

    alpha_init sets the first trial; the solver warm-starts it from the
    previously accepted step so a method stuck at tiny steps does not
    pay a full bisection from 1 every iteration.
    """
    return _wolfe(p, cone, x, F_x, d, h_xd, params, counters,
                  strong=False, alpha_init=alpha_init)


def wolfe_strong(p, cone, x, F_x, J_x, d, h_xd, params, counters,
                 alpha_init=1.0) -> StepResult:
    """Sufficient decrease plus the two-sided curvature bound."""
    return _wolfe(p, cone, x, F_x, d, h_xd, params, counters,
                  strong=True, alpha_init=alpha_init)


def verify_conditions(kind, F_x, F_new, h_xd, h_new_d, alpha, rho, sigma,
                      cone: ConeOrder) -> bool:
    """Re-check an accepted step from raw values; the tests' referee.

    kind is 'armijo', 'wolfe', or 'strong-wolfe'.
    """
    F_x = np.asarray(F_x, dtype=float)
    F_new = np.asarray(F_new, dtype=float)
    ok = cone_leq(F_new, F_x + rho * alpha * h_xd * cone.e, cone)
    if kind == "armijo":
        return ok
    if kind == "wolfe":
        return ok and h_new_d >= sigma * h_xd
    if kind == "strong-wolfe":
        return ok and abs(h_new_d) <= sigma * abs(h_xd)
    raise ValueError(f"unknown line-search kind {kind!r}")
