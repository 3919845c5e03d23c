"""Tests for the ordering-cone scalarization."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from veccg.cone import (
    TOL_CONE,
    ConeError,
    ConeOrder,
    cone_leq,
    h,
    nonneg_orthant,
    phi,
    polyhedral,
)


def _vectors(m, max_abs=1e6):
    elem = st.floats(-max_abs, max_abs, allow_nan=False, allow_infinity=False)
    return st.lists(elem, min_size=m, max_size=m).map(np.array)


# ---------------------------------------------------------------------------
# construction and validation


def test_orthant_shape():
    cone = nonneg_orthant(3)
    assert cone.m == 3
    assert cone.q == 3
    np.testing.assert_allclose(cone.generators, np.eye(3))
    np.testing.assert_allclose(cone.e, np.ones(3))


def test_orthant_rejects_nonpositive_dimension():
    with pytest.raises(ConeError):
        nonneg_orthant(0)


def test_generators_must_be_unit_norm():
    with pytest.raises(ConeError):
        ConeOrder(np.array([[2.0, 0.0]]), np.array([0.5, 0.5]))


def test_e_must_be_interior():
    # e orthogonal to a generator: <w, e> = 0 is not allowed.
    with pytest.raises(ConeError):
        ConeOrder(np.eye(2), np.array([1.0, 0.0]))


def test_e_dimension_mismatch():
    with pytest.raises(ConeError):
        ConeOrder(np.eye(2), np.ones(3))


def test_nonfinite_data_rejected():
    with pytest.raises(ConeError):
        ConeOrder(np.array([[1.0, 0.0], [0.0, np.nan]]), np.ones(2))


def test_cone_is_immutable():
    cone = nonneg_orthant(2)
    with pytest.raises(ValueError):
        cone.generators[0, 0] = 5.0


def test_polyhedral_normalizes_generators():
    cone = polyhedral([[2.0, 0.0], [0.0, 3.0]])
    np.testing.assert_allclose(cone.generators, np.eye(2))
    # e is the generator mean rescaled so max <w, e> = 1.
    np.testing.assert_allclose(cone.e, np.ones(2))


def test_polyhedral_rejects_zero_generator():
    with pytest.raises(ConeError):
        polyhedral([[1.0, 0.0], [0.0, 0.0]])


def test_polyhedral_ice_cream_like():
    # A pointed cone in R^2 narrower than the orthant.
    cone = polyhedral([[1.0, 0.2], [0.2, 1.0]])
    assert cone.q == 2
    we = cone.generators @ cone.e
    assert np.all(we > 0.0)
    assert np.max(we) == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# phi: hand values


def test_phi_is_componentwise_max_for_orthant():
    cone = nonneg_orthant(3)
    assert phi([1.0, -2.0, 0.5], cone) == 1.0
    assert phi([-1.0, -2.0, -0.5], cone) == -0.5
    assert phi([0.0, 0.0, 0.0], cone) == 0.0


def test_phi_negative_iff_interior_of_negative_cone():
    cone = nonneg_orthant(2)
    assert phi([-1e-9, -1.0], cone) < 0.0
    assert phi([0.0, -1.0], cone) == 0.0


def test_phi_dimension_check():
    with pytest.raises(ConeError):
        phi([1.0, 2.0, 3.0], nonneg_orthant(2))


def test_h_matches_phi_of_jacobian_product():
    cone = nonneg_orthant(2)
    J = np.array([[1.0, 0.0], [0.0, -2.0]])
    d = np.array([3.0, 1.0])
    assert h(J, d, cone) == phi(J @ d, cone) == 3.0


def test_h_dimension_check():
    with pytest.raises(ConeError):
        h(np.eye(2), [1.0, 2.0, 3.0], nonneg_orthant(2))


def test_cone_leq_hand_cases():
    cone = nonneg_orthant(2)
    assert cone_leq([0.0, 0.0], [1.0, 1.0], cone)
    assert cone_leq([1.0, 1.0], [1.0, 1.0], cone)
    assert not cone_leq([1.0, 0.0], [0.0, 1.0], cone)
    # Slack: a violation below TOL_CONE still passes.
    assert cone_leq([1.0 + TOL_CONE / 2, 0.0], [1.0, 0.0], cone)


# ---------------------------------------------------------------------------
# phi: structural properties


@settings(max_examples=200)
@given(_vectors(3), _vectors(3))
def test_phi_subadditive(u, v):
    cone = nonneg_orthant(3)
    assert phi(u + v, cone) <= phi(u, cone) + phi(v, cone) + 1e-9 * (
        1.0 + abs(phi(u, cone)) + abs(phi(v, cone)))


@settings(max_examples=200)
@given(_vectors(3), st.floats(0.0, 1e3, allow_nan=False))
def test_phi_positively_homogeneous(y, t):
    cone = nonneg_orthant(3)
    lhs = phi(t * y, cone)
    rhs = t * phi(y, cone)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12 * (1.0 + abs(rhs)))


@settings(max_examples=200)
@given(_vectors(4), _vectors(4))
def test_phi_lipschitz(u, v):
    # Unit generators make phi 1-Lipschitz.
    cone = nonneg_orthant(4)
    gap = abs(phi(u, cone) - phi(v, cone))
    dist = float(np.linalg.norm(u - v))
    assert gap <= dist + 1e-9 * (1.0 + dist)


@settings(max_examples=200)
@given(_vectors(3), _vectors(3))
def test_phi_monotone_in_cone_order(u, v):
    # u <=_K v implies phi(u) <= phi(v) for the orthant.
    cone = nonneg_orthant(3)
    lo = np.minimum(u, v)
    assert phi(lo, cone) <= phi(v, cone) + 1e-12


@settings(max_examples=100)
@given(_vectors(2))
def test_cone_leq_reflexive(u):
    assert cone_leq(u, u, nonneg_orthant(2))


def test_polyhedral_phi_uses_all_generators():
    cone = polyhedral([[1.0, 0.0], [1.0, 1.0]])
    w2 = np.array([1.0, 1.0]) / np.sqrt(2.0)
    y = np.array([0.0, 1.0])
    assert phi(y, cone) == pytest.approx(float(w2 @ y))
