"""Steepest descent direction for a cone-ordered vector objective.

The direction v(x) is the unique minimizer of h(x, d) + ||d||^2 / 2.
With a finite generator set this problem has a small dual: writing
g_j = J^T w_j, minimize

    psi(lambda) = 0.5 * || sum_j lambda_j g_j ||^2

over the unit simplex, and recover v = -G lambda.  The dual dimension is
the number of generators (m for the orthant), so a projected-gradient
method with Barzilai-Borwein steps is plenty; q = 1 and q = 2 are solved
in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cone import ConeOrder

_MAX_DUAL_ITERS = 10_000


class SubproblemError(RuntimeError):
    """Dual solver failed to reach the requested tolerance."""

    def __init__(self, message, lam, gap):
        super().__init__(message)
        self.lam = lam
        self.gap = gap


@dataclass(frozen=True)
class SteepestResult:
    """Solution of the direction subproblem at one iterate.

    Attributes
    ----------
    v : steepest descent direction.
    theta : optimal value h(x, v) + ||v||^2 / 2, always <= 0.
    h_at_v : h(x, v), equal to -||v||^2 at the exact optimum.
    lam : simplex weights certifying v = -sum_j lam_j g_j.
    """

    v: np.ndarray
    theta: float
    h_at_v: float
    lam: np.ndarray


def project_simplex(y: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the unit simplex (sort-based)."""
    u = np.sort(y)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, len(y) + 1)
    rho = np.nonzero(u - css / idx > 0)[0][-1]
    tau = css[rho] / (rho + 1.0)
    return np.maximum(y - tau, 0.0)


def _dual_two(G: np.ndarray) -> np.ndarray:
    # Exact minimizer of ||t g1 + (1-t) g2||^2 / 2 on [0, 1].
    g1, g2 = G[:, 0], G[:, 1]
    diff = g1 - g2
    denom = float(diff @ diff)
    if denom == 0.0:
        return np.array([0.5, 0.5])
    t = float((g2 - g1) @ g2) / denom
    t = min(1.0, max(0.0, t))
    return np.array([t, 1.0 - t])


def _residual(Q, lam):
    # Fixed unit-step projected-gradient residual; zero iff KKT holds.
    return float(np.max(np.abs(project_simplex(lam - Q @ lam) - lam)))


def _face_solve(Q, support):
    # Exact KKT solve of min 0.5 lam' Q lam, sum(lam) = 1 on one face.
    k = len(support)
    A = np.zeros((k + 1, k + 1))
    A[:k, :k] = Q[np.ix_(support, support)]
    A[:k, k] = 1.0
    A[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    sol, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    lam = np.zeros(Q.shape[0])
    lam[support] = sol[:k]
    if np.any(lam < -1e-10):
        return None
    lam = np.maximum(lam, 0.0)
    s = lam.sum()
    return lam / s if s > 0 else None


def _polish(Q, lam, tol):
    # Re-solve exactly on the face suggested by the current support.
    support = np.nonzero(lam > 1e-14)[0]
    if support.size == 0:
        return None
    cand = _face_solve(Q, list(support))
    if cand is not None and _residual(Q, cand) <= tol:
        return cand
    return None


def _enumerate_faces(Q, lam, tol):
    # Exact global solve for small q: the minimizer lives on some face
    # of the simplex, where the equality-KKT system pins it down.
    from itertools import combinations

    q = Q.shape[0]
    best, best_res = lam, _residual(Q, lam)
    for size in range(1, q + 1):
        for support in combinations(range(q), size):
            cand = _face_solve(Q, list(support))
            if cand is None:
                continue
            res = _residual(Q, cand)
            if res < best_res:
                best, best_res = cand, res
            if best_res <= tol:
                return best
    if best_res <= tol:
        return best
    raise SubproblemError("dual solver did not reach tolerance", best, best_res)


def _dual_pg(G: np.ndarray, tol: float) -> np.ndarray:
    # Projected gradient with BB steps on psi(lam) = ||G lam||^2 / 2,
    # with a monotone 1/L safeguard against BB limit cycles, finished
    # by an exact KKT solve on the identified face.  Small duals that
    # fail to converge quickly fall through to face enumeration.
    Q = G.T @ G
    q = Q.shape[0]
    lam = np.full(q, 1.0 / q)
    grad = Q @ lam
    psi = 0.5 * float(lam @ grad)
    step_safe = 1.0 / max(np.linalg.norm(Q, 2), 1e-300)
    step = step_safe
    budget = 100 if q <= 16 else _MAX_DUAL_ITERS
    for it in range(budget):
        if _residual(Q, lam) <= tol:
            return lam
        if it % 20 == 19:
            cand = _polish(Q, lam, tol)
            if cand is not None:
                return cand
        lam_new = project_simplex(lam - step * grad)
        grad_new = Q @ lam_new
        psi_new = 0.5 * float(lam_new @ grad_new)
        if psi_new > psi:
            lam_new = project_simplex(lam - step_safe * grad)
            grad_new = Q @ lam_new
            psi_new = 0.5 * float(lam_new @ grad_new)
        s = lam_new - lam
        y = grad_new - grad
        sy = float(s @ y)
        ss = float(s @ s)
        step = ss / sy if sy > 1e-300 else step_safe
        lam, grad, psi = lam_new, grad_new, psi_new
    if _residual(Q, lam) <= tol:
        return lam
    if q <= 16:
        return _enumerate_faces(Q, lam, tol)
    raise SubproblemError("dual projected gradient did not converge",
                          lam, _residual(Q, lam))


def steepest_direction(J, cone: ConeOrder, tol: float | None = None) -> SteepestResult:
    """Solve the direction subproblem at the iterate with Jacobian J.

    Returns the steepest descent direction v, the optimal value theta,
    h(x, v), and the dual simplex weights.  `tol` bounds the dual
    projected-gradient residual; defaults to 1e-12 * (1 + ||J||_F).
    """
    J = np.atleast_2d(np.asarray(J, dtype=float))
    if J.shape[0] != cone.m:
        raise ValueError(f"J has {J.shape[0]} rows, cone expects {cone.m}")
    if tol is None:
        tol = 1e-12 * (1.0 + float(np.linalg.norm(J)))
    G = J.T @ cone.generators.T  # columns g_j = J^T w_j
    q = G.shape[1]
    if not np.any(G):
        return SteepestResult(np.zeros(J.shape[1]), 0.0, 0.0, np.full(q, 1.0 / q))
    if q == 1:
        lam = np.array([1.0])
    elif q == 2:
        lam = _dual_two(G)
    else:
        lam = _dual_pg(G, tol)
    v = -(G @ lam)
    h_at_v = float(np.max(G.T @ v))
    theta = min(h_at_v + 0.5 * float(v @ v), 0.0)
    return SteepestResult(v, theta, h_at_v, lam)


def is_critical(theta: float, tol_crit: float) -> bool:
    """Numerical stand-in for the exact stopping test v(x) = 0."""
    return theta >= -tol_crit
