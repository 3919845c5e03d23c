"""Tests for the problem suite and counted evaluation."""

import numpy as np
import pytest

from veccg.cone import nonneg_orthant
from veccg.problems import (
    EvalCounters,
    EvaluationError,
    VectorProblem,
    evaluate_F,
    evaluate_J,
    finite_difference_jacobian,
    get_problem,
    problem_names,
    quad_distance_problem,
    suite,
)
from veccg.subproblem import steepest_direction


def test_registry_has_at_least_ten_problems():
    names = problem_names()
    assert len(names) >= 10
    assert len(set(names)) == len(names)


def test_get_problem_unknown_name():
    with pytest.raises(KeyError):
        get_problem("nope")


def test_suite_shapes_consistent():
    rng = np.random.default_rng(0)
    for p in suite():
        x = p.sample_start(rng)
        assert x.shape == (p.n,)
        c = EvalCounters()
        F = evaluate_F(p, x, c)
        J = evaluate_J(p, x, c)
        assert F.shape == (p.m,)
        assert J.shape == (p.m, p.n)
        assert c.f_evals == 1 and c.j_evals == 1


def test_quad_distance_hand_values():
    # Two anchors 0 and 2e in R^2: F(0) = (0, 4) with the 0.5 scale.
    p = quad_distance_problem("pair", [[0.0, 0.0], [2.0, 2.0]], -2.0, 4.0)
    np.testing.assert_allclose(p.eval_F(np.zeros(2)), [0.0, 4.0])
    np.testing.assert_allclose(p.eval_F(np.array([2.0, 2.0])), [4.0, 0.0])
    np.testing.assert_allclose(p.eval_J(np.zeros(2)),
                               [[0.0, 0.0], [-2.0, -2.0]])


def test_quad_distance_segment_is_critical():
    # Every convex combination of the anchors is Pareto critical: the
    # two gradients point in exactly opposite directions there.
    p = quad_distance_problem("pair", [[0.0, 0.0], [2.0, 2.0]], -2.0, 4.0)
    cone = nonneg_orthant(2)
    for t in (0.0, 0.25, 0.5, 1.0):
        x = t * np.array([2.0, 2.0])
        sd = steepest_direction(p.eval_J(x), cone)
        assert sd.theta >= -1e-12
    # And points off the segment are not.
    sd = steepest_direction(p.eval_J(np.array([3.0, -1.0])), cone)
    assert sd.theta < -1e-2


def test_sample_start_deterministic_and_in_box():
    p = get_problem("bk1")
    a = p.sample_start(np.random.default_rng(7))
    b = p.sample_start(np.random.default_rng(7))
    np.testing.assert_array_equal(a, b)
    lo, hi = p.start_box
    assert np.all(a >= lo) and np.all(a <= hi)


def test_counters_accumulate():
    p = get_problem("sp1")
    c = EvalCounters()
    x = np.array([0.3, -0.2])
    for _ in range(3):
        evaluate_F(p, x, c)
    evaluate_J(p, x, c)
    assert (c.f_evals, c.j_evals) == (3, 1)


def test_nonfinite_objective_raises():
    def bad_F(x):
        return np.array([np.inf, 0.0])

    p = VectorProblem("bad", 1, 2, bad_F, lambda x: np.zeros((2, 1)),
                      (np.array([-1.0]), np.array([1.0])), convex=False)
    with pytest.raises(EvaluationError) as exc:
        evaluate_F(p, np.array([0.5]), EvalCounters())
    np.testing.assert_array_equal(exc.value.x, [0.5])


def test_start_box_validation():
    with pytest.raises(ValueError):
        VectorProblem("bad", 2, 1, lambda x: x[:1], lambda x: np.eye(1, 2),
                      (np.array([1.0, 0.0]), np.array([0.0, 1.0])),
                      convex=False)


@pytest.mark.parametrize("name", problem_names())
def test_analytic_jacobians_match_finite_differences(name):
    p = get_problem(name)
    rng = np.random.default_rng(42)
    for _ in range(5):
        x = p.sample_start(rng)
        J = p.eval_J(x)
        J_fd = finite_difference_jacobian(p, x)
        scale = 1.0 + np.abs(J_fd)
        assert np.max(np.abs(J - J_fd) / scale) < 1e-5, name
