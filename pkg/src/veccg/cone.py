"""Ordering cones and the support-function scalarization.

The partial order on objective space is induced by a closed, convex,
pointed cone K with nonempty interior.  We represent K through a finite
generator set ``w_1, ..., w_q`` of its positive polar cone K* (each a
unit vector), together with an interior direction ``e`` of K used by the
line searches.  The scalarization

    phi(y) = max_j <y, w_j>

is negative exactly when y lies in -int(K), which is what makes it the
workhorse for descent tests: a direction d is a K-descent direction for
F at x iff phi(JF(x) d) < 0.

Only finitely generated cones are supported.  This covers the
nonnegative orthant (the multiobjective case) and every polyhedral cone.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Tolerance on phi used by cone_leq; strict <= 0 would reject
# analytically feasible steps under roundoff.
TOL_CONE = 1e-12

_UNIT_TOL = 1e-12


class ConeError(ValueError):
    """Raised when cone data fails validation."""


@dataclass(frozen=True)
class ConeOrder:
    """A finitely generated ordering cone.

    Parameters
    ----------
    generators : (q, m) array
        Unit-norm generators of the dual cone K*, one per row.
    e : (m,) array
        Interior direction of K with ``<w_j, e> <= 1`` for every
        generator and ``min_j <w_j, e> > 0``.

    Immutable after construction; safe to share across workers.
    """

    generators: np.ndarray
    e: np.ndarray

    def __post_init__(self):
        W = np.atleast_2d(np.asarray(self.generators, dtype=float))
        e = np.asarray(self.e, dtype=float).ravel()
        if W.ndim != 2 or W.shape[0] < 1:
            raise ConeError("need at least one generator")
        if e.shape[0] != W.shape[1]:
            raise ConeError(
                f"e has dimension {e.shape[0]}, generators have {W.shape[1]}"
            )
        if not (np.all(np.isfinite(W)) and np.all(np.isfinite(e))):
            raise ConeError("cone data must be finite")
        norms = np.linalg.norm(W, axis=1)
        if np.any(np.abs(norms - 1.0) > _UNIT_TOL):
            raise ConeError("generators must have unit Euclidean norm")
        we = W @ e
        if np.any(we > 1.0 + _UNIT_TOL):
            raise ConeError("<w, e> <= 1 must hold for every generator")
        if np.min(we) <= 0.0:
            raise ConeError("e must satisfy <w, e> > 0 for every generator")
        W.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "generators", W)
        object.__setattr__(self, "e", e)

    @property
    def m(self) -> int:
        """Objective-space dimension."""
        return self.generators.shape[1]

    @property
    def q(self) -> int:
        """Number of generators."""
        return self.generators.shape[0]


def nonneg_orthant(m: int) -> ConeOrder:
    """The cone for componentwise (multiobjective) ordering on R^m.

    Generators are the canonical basis and e = (1, ..., 1).
    """
    if m < 1:
        raise ConeError("m must be >= 1")
    return ConeOrder(np.eye(m), np.ones(m))


def polyhedral(generators) -> ConeOrder:
    """Build a ConeOrder from raw (not necessarily unit) generators.

    Each generator is normalized to unit norm.  The interior vector e is
    the mean of the normalized generators, rescaled so that
    ``max_j <w_j, e> = 1``.
    """
    W = np.atleast_2d(np.asarray(generators, dtype=float))
    norms = np.linalg.norm(W, axis=1)
    if np.any(norms == 0.0):
        raise ConeError("zero generator")
    W = W / norms[:, None]
    e = W.mean(axis=0)
    scale = np.max(W @ e)
    if scale <= 0.0:
        raise ConeError("generator mean is not an interior direction")
    return ConeOrder(W, e / scale)


def _check_dim(y: np.ndarray, cone: ConeOrder, what: str) -> np.ndarray:
    y = np.asarray(y, dtype=float).ravel()
    if y.shape[0] != cone.m:
        raise ConeError(f"{what} has dimension {y.shape[0]}, cone expects {cone.m}")
    return y


def phi(y, cone: ConeOrder) -> float:
    """Support-function scalarization max_j <y, w_j>.

    Negative iff y is in -int(K); subadditive, positively homogeneous,
    and 1-Lipschitz (generators are unit vectors).
    """
    y = _check_dim(y, cone, "y")
    return float(np.max(cone.generators @ y))


def h(J, d, cone: ConeOrder) -> float:
    """Worst-case directional derivative phi(J d).

    ``d`` is a K-descent direction at the point where J was evaluated
    iff this is negative.
    """
    J = np.asarray(J, dtype=float)
    d = np.asarray(d, dtype=float).ravel()
    if J.ndim == 1:
        J = J[None, :]
    if J.shape[1] != d.shape[0]:
        raise ConeError(f"J has {J.shape[1]} columns, d has dimension {d.shape[0]}")
    return phi(J @ d, cone)


def cone_leq(u, v, cone: ConeOrder, tol: float = TOL_CONE) -> bool:
    """Whether u precedes v in the cone order (v - u in K), with slack tol."""
    u = _check_dim(u, cone, "u")
    v = _check_dim(v, cone, "v")
    return phi(u - v, cone) <= tol
