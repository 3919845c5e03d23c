"""Vector-valued test problems and counted evaluation.

A VectorProblem bundles F: R^n -> R^m, its analytic Jacobian, and a box
from which initial points are sampled.  All evaluations go through
evaluate_F / evaluate_J so that a per-run EvalCounters object sees every
objective and Jacobian evaluation the library performs.

The suite collects classic smooth multiobjective problems (JOS1, BK1,
SP1, ZLT1, MHHM2, FDS, IKK1, Fonseca-Fleming, Poloni, MOP5, VU1,
SLC-DT1, plus an ill-conditioned quadratic pair), reimplemented from
their standard formulas with analytic Jacobians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np


class EvaluationError(RuntimeError):
    """Objective or Jacobian produced a non-finite value."""

    def __init__(self, message: str, x: np.ndarray):
        super().__init__(message)
        self.x = np.asarray(x)


@dataclass
class EvalCounters:
    """Monotone evaluation counters for one solver run.

    Not shared across concurrent runs.
    """

    f_evals: int = 0
    j_evals: int = 0


@dataclass(frozen=True)
class VectorProblem:
    """A smooth vector objective with analytic Jacobian and start box."""

    name: str
    n: int
    m: int
    eval_F: Callable[[np.ndarray], np.ndarray]
    eval_J: Callable[[np.ndarray], np.ndarray]
    start_box: tuple[np.ndarray, np.ndarray]
    convex: bool

    def __post_init__(self):
        lo, hi = self.start_box
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        if lo.shape != (self.n,) or hi.shape != (self.n,):
            raise ValueError(f"{self.name}: start_box must be two {self.n}-vectors")
        if not np.all(lo < hi):
            raise ValueError(f"{self.name}: start_box lower must be < upper")
        object.__setattr__(self, "start_box", (lo, hi))

    def sample_start(self, rng: np.random.Generator) -> np.ndarray:
        lo, hi = self.start_box
        return rng.uniform(lo, hi)


def evaluate_F(p: VectorProblem, x, c: EvalCounters) -> np.ndarray:
    """Evaluate F(x), counting exactly one objective evaluation."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(p.eval_F(x), dtype=float)
    c.f_evals += 1
    if not np.all(np.isfinite(y)):
        raise EvaluationError(f"{p.name}: non-finite objective value", x)
    return y


def evaluate_J(p: VectorProblem, x, c: EvalCounters) -> np.ndarray:
    """Evaluate the Jacobian JF(x), counting exactly one Jacobian evaluation."""
    x = np.asarray(x, dtype=float)
    J = np.asarray(p.eval_J(x), dtype=float)
    c.j_evals += 1
    if not np.all(np.isfinite(J)):
        raise EvaluationError(f"{p.name}: non-finite Jacobian", x)
    return J


def finite_difference_jacobian(p: VectorProblem, x, step_scale: float = 1e-6):
    """Central finite-difference Jacobian, the oracle for eval_J."""
    x = np.asarray(x, dtype=float)
    step = step_scale * (1.0 + np.linalg.norm(x))
    J = np.empty((p.m, p.n))
    for i in range(p.n):
        xp = x.copy()
        xm = x.copy()
        xp[i] += step
        xm[i] -= step
        J[:, i] = (np.asarray(p.eval_F(xp)) - np.asarray(p.eval_F(xm))) / (2 * step)
    return J


# ---------------------------------------------------------------------------
# Problem definitions


def quad_distance_problem(name, anchors, box_lo, box_hi, scale=0.5):
    """JOS1-style problem: F_i(x) = scale * ||x - a_i||^2.

    `anchors` is an (m, n) array of component minimizers.
    """
    A = np.atleast_2d(np.asarray(anchors, dtype=float))
    m, n = A.shape

    def F(x):
        return scale * np.sum((x[None, :] - A) ** 2, axis=1)

    def J(x):
        return 2.0 * scale * (x[None, :] - A)

    return VectorProblem(
        name, n, m, F, J,
        (np.full(n, float(box_lo)), np.full(n, float(box_hi))),
        convex=True,
    )


def _jos1(n=50):
    anchors = np.vstack([np.zeros(n), 2.0 * np.ones(n)])
    return quad_distance_problem("jos1", anchors, -2.0, 4.0)


def _bk1():
    def F(x):
        return np.array([
            x[0] ** 2 + x[1] ** 2,
            (x[0] - 5.0) ** 2 + (x[1] - 5.0) ** 2,
        ])

    def J(x):
        return np.array([
            [2 * x[0], 2 * x[1]],
            [2 * (x[0] - 5.0), 2 * (x[1] - 5.0)],
        ])

    return VectorProblem("bk1", 2, 2, F, J,
                         (np.array([-5.0, -5.0]), np.array([10.0, 10.0])),
                         convex=True)


def _sp1():
    def F(x):
        d = x[0] - x[1]
        return np.array([(x[0] - 1.0) ** 2 + d ** 2, (x[1] - 3.0) ** 2 + d ** 2])

    def J(x):
        d = x[0] - x[1]
        return np.array([
            [2 * (x[0] - 1.0) + 2 * d, -2 * d],
            [2 * d, 2 * (x[1] - 3.0) - 2 * d],
        ])

    return VectorProblem("sp1", 2, 2, F, J,
                         (np.array([-1.0, -1.0]), np.array([5.0, 5.0])),
                         convex=True)


def _zlt1(n=5, m=3):
    def F(x):
        s = np.sum(x ** 2)
        return np.array([s - x[j] ** 2 + (x[j] - 1.0) ** 2 for j in range(m)])

    def J(x):
        base = 2.0 * np.tile(x, (m, 1))
        for j in range(m):
            base[j, j] = 2.0 * (x[j] - 1.0)
        return base

    return VectorProblem("zlt1", n, m, F, J,
                         (np.full(n, -2.0), np.full(n, 2.0)), convex=True)


def _mhhm2():
    centers = np.array([[0.8, 0.6], [0.85, 0.7], [0.75, 0.85]])

    def F(x):
        return np.sum((x[None, :] - centers) ** 2, axis=1)

    def J(x):
        return 2.0 * (x[None, :] - centers)

    return VectorProblem("mhhm2", 2, 3, F, J,
                         (np.zeros(2), np.ones(2)), convex=True)


def _fds(n=5):
    idx = np.arange(1, n + 1, dtype=float)
    w3 = idx * (n - idx + 1.0) / (n * (n + 1.0))

    def F(x):
        f1 = np.sum(idx * (x - idx) ** 4) / n ** 2
        f2 = math.exp(np.sum(x) / n) + float(x @ x)
        f3 = float(w3 @ np.exp(-x))
        return np.array([f1, f2, f3])

    def J(x):
        r1 = 4.0 * idx * (x - idx) ** 3 / n ** 2
        r2 = math.exp(np.sum(x) / n) / n + 2.0 * x
        r3 = -w3 * np.exp(-x)
        return np.vstack([r1, r2, r3])

    return VectorProblem("fds", n, 3, F, J,
                         (np.full(n, -2.0), np.full(n, 2.0)), convex=True)


def _ikk1():
    def F(x):
        return np.array([x[0] ** 2, (x[0] - 20.0) ** 2, x[1] ** 2])

    def J(x):
        return np.array([[2 * x[0], 0.0], [2 * (x[0] - 20.0), 0.0], [0.0, 2 * x[1]]])

    return VectorProblem("ikk1", 2, 3, F, J,
                         (np.array([-5.0, -5.0]), np.array([25.0, 25.0])),
                         convex=True)


def _quad_ill(n=200, kappa=100.0):
    # Ill-conditioned quadratic pair: Lipschitz-constant stress test.
    d1 = np.linspace(1.0, kappa, n)
    d2 = d1[::-1].copy()
    ones = np.ones(n)

    def F(x):
        y = x - ones
        return np.array([0.5 * float(d1 @ x ** 2) / n, 0.5 * float(d2 @ y ** 2) / n])

    def J(x):
        return np.vstack([d1 * x, d2 * (x - ones)]) / n

    return VectorProblem("quad200", n, 2, F, J,
                         (np.full(n, -1.0), np.full(n, 1.0)), convex=True)


def _fon(n=3):
    a = 1.0 / math.sqrt(n)

    def F(x):
        s1 = np.sum((x - a) ** 2)
        s2 = np.sum((x + a) ** 2)
        return np.array([1.0 - math.exp(-s1), 1.0 - math.exp(-s2)])

    def J(x):
        s1 = np.sum((x - a) ** 2)
        s2 = np.sum((x + a) ** 2)
        return np.vstack([
            2.0 * (x - a) * math.exp(-s1),
            2.0 * (x + a) * math.exp(-s2),
        ])

    # Box kept tight: far out both exponentials flatten and every point
    # is numerically critical.
    return VectorProblem("fonseca", n, 2, F, J,
                         (np.full(n, -2.0), np.full(n, 2.0)), convex=False)


def _poloni():
    A1 = 0.5 * math.sin(1) - 2 * math.cos(1) + math.sin(2) - 1.5 * math.cos(2)
    A2 = 1.5 * math.sin(1) - math.cos(1) + 2 * math.sin(2) - 0.5 * math.cos(2)

    def _B(x):
        B1 = 0.5 * math.sin(x[0]) - 2 * math.cos(x[0]) + math.sin(x[1]) - 1.5 * math.cos(x[1])
        B2 = 1.5 * math.sin(x[0]) - math.cos(x[0]) + 2 * math.sin(x[1]) - 0.5 * math.cos(x[1])
        return B1, B2

    def F(x):
        B1, B2 = _B(x)
        return np.array([
            1.0 + (A1 - B1) ** 2 + (A2 - B2) ** 2,
            (x[0] + 3.0) ** 2 + (x[1] + 1.0) ** 2,
        ])

    def J(x):
        B1, B2 = _B(x)
        dB1 = np.array([0.5 * math.cos(x[0]) + 2 * math.sin(x[0]),
                        math.cos(x[1]) + 1.5 * math.sin(x[1])])
        dB2 = np.array([1.5 * math.cos(x[0]) + math.sin(x[0]),
                        2 * math.cos(x[1]) + 0.5 * math.sin(x[1])])
        r1 = -2.0 * (A1 - B1) * dB1 - 2.0 * (A2 - B2) * dB2
        r2 = np.array([2.0 * (x[0] + 3.0), 2.0 * (x[1] + 1.0)])
        return np.vstack([r1, r2])

    return VectorProblem("poloni", 2, 2, F, J,
                         (np.full(2, -math.pi), np.full(2, math.pi)),
                         convex=False)


def _mop5():
    def F(x):
        r = x[0] ** 2 + x[1] ** 2
        f1 = 0.5 * r + math.sin(r)
        f2 = (3 * x[0] - 2 * x[1] + 4) ** 2 / 8.0 + (x[0] - x[1] + 1) ** 2 / 27.0 + 15.0
        f3 = 1.0 / (r + 1.0) - 1.1 * math.exp(-r)
        return np.array([f1, f2, f3])

    def J(x):
        r = x[0] ** 2 + x[1] ** 2
        g1 = x * (1.0 + 2.0 * math.cos(r))
        u = 3 * x[0] - 2 * x[1] + 4
        w = x[0] - x[1] + 1
        g2 = np.array([0.75 * u + 2 * w / 27.0, -0.5 * u - 2 * w / 27.0])
        g3 = x * (-2.0 / (r + 1.0) ** 2 + 2.2 * math.exp(-r))
        return np.vstack([g1, g2, g3])

    return VectorProblem("mop5", 2, 3, F, J,
                         (np.full(2, -1.0), np.full(2, 1.0)), convex=False)


def _vu1():
    def F(x):
        r = x[0] ** 2 + x[1] ** 2
        return np.array([1.0 / (r + 1.0), x[0] ** 2 + 3 * x[1] ** 2 + 1.0])

    def J(x):
        r = x[0] ** 2 + x[1] ** 2
        return np.vstack([-2.0 * x / (r + 1.0) ** 2,
                          np.array([2 * x[0], 6 * x[1]])])

    return VectorProblem("vu1", 2, 2, F, J,
                         (np.full(2, -3.0), np.full(2, 3.0)), convex=False)


def _slcdt1(lam=0.85):
    def F(x):
        u = x[0] + x[1]
        w = x[0] - x[1]
        A = math.sqrt(1.0 + u * u)
        B = math.sqrt(1.0 + w * w)
        E = math.exp(-w * w)
        return np.array([0.5 * (A + B + w) + lam * E,
                         0.5 * (A + B - w) + lam * E])

    def J(x):
        u = x[0] + x[1]
        w = x[0] - x[1]
        A = math.sqrt(1.0 + u * u)
        B = math.sqrt(1.0 + w * w)
        dE = -2.0 * w * math.exp(-w * w) * lam
        r1 = np.array([0.5 * (u / A + w / B + 1.0) + dE,
                       0.5 * (u / A - w / B - 1.0) - dE])
        r2 = np.array([0.5 * (u / A + w / B - 1.0) + dE,
                       0.5 * (u / A - w / B + 1.0) - dE])
        return np.vstack([r1, r2])

    return VectorProblem("slcdt1", 2, 2, F, J,
                         (np.full(2, -1.5), np.full(2, 1.5)), convex=False)


_FACTORIES: dict[str, Callable[[], VectorProblem]] = {
    "jos1": _jos1,
    "bk1": _bk1,
    "sp1": _sp1,
    "zlt1": _zlt1,
    "mhhm2": _mhhm2,
    "fds": _fds,
    "ikk1": _ikk1,
    "quad200": _quad_ill,
    "fonseca": _fon,
    "poloni": _poloni,
    "mop5": _mop5,
    "vu1": _vu1,
    "slcdt1": _slcdt1,
}


def problem_names() -> list[str]:
    return list(_FACTORIES)


def get_problem(name: str) -> VectorProblem:
    try:
        return _FACTORIES[name]()
    except KeyError:
        raise KeyError(f"unknown problem {name!r}; known: {', '.join(_FACTORIES)}")


def suite() -> list[VectorProblem]:
    """All registered test problems."""
    return [f() for f in _FACTORIES.values()]
