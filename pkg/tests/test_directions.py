"""Tests for the conjugate-parameter rules."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from veccg.cone import h, nonneg_orthant
from veccg.directions import (
    METHODS,
    NONNEGATIVE_METHODS,
    ConfigurationError,
    DegenerateBetaError,
    beta_mprp,
    beta_prp,
    beta_prp_plus,
    compute_beta,
    direction_update,
)

# A generic set of scalarization values used by several hand checks:
# current direction is a good descent direction, the previous Jacobian
# still sees it as ascent (h_km1_vk > 0).
VALS = dict(h_k_vk=-1.0, h_km1_vk=2.0, h_k_dkm1=1.0,
            h_km1_vkm1=-2.0, h_km1_dkm1=-0.5)


def _nonzero_floats(lo, hi):
    return st.floats(lo, hi, allow_nan=False).filter(lambda v: abs(v) > 1e-3)


# ---------------------------------------------------------------------------
# modified-PRP rule


def test_mprp_hand_value():
    # num = -(-1) * (|2| + 2) = 4
    # den = max(2.4*|1*2|, -2.4*(-2)*|2|) = max(4.8, 9.6) = 9.6
    assert beta_mprp(-1.0, 2.0, 1.0, -2.0, mu=2.4) == pytest.approx(5.0 / 12.0)


def test_mprp_hand_value_other_mu():
    assert beta_mprp(-1.0, 2.0, 1.0, -2.0, mu=3.0) == pytest.approx(1.0 / 3.0)


def test_mprp_zero_when_cross_term_nonpositive():
    assert beta_mprp(-1.0, -2.0, 1.0, -2.0, mu=2.4) == 0.0
    assert beta_mprp(-1.0, 0.0, 1.0, -2.0, mu=2.4) == 0.0


def test_mprp_rejects_mu_at_most_two():
    with pytest.raises(ConfigurationError):
        beta_mprp(-1.0, 2.0, 1.0, -2.0, mu=2.0)


@settings(max_examples=300)
@given(
    h_k_vk=st.floats(-1e6, -1e-9, allow_nan=False),
    h_km1_vk=st.floats(-1e6, 1e6, allow_nan=False),
    h_k_dkm1=_nonzero_floats(-1e6, 1e6),
    h_km1_vkm1=st.floats(-1e6, -1e-9, allow_nan=False),
    mu=st.floats(2.0001, 10.0, allow_nan=False),
)
def test_mprp_nonnegative_and_bounded(h_k_vk, h_km1_vk, h_k_dkm1,
                                      h_km1_vkm1, mu):
    beta = beta_mprp(h_k_vk, h_km1_vk, h_k_dkm1, h_km1_vkm1, mu)
    assert beta >= 0.0
    # The defining bound: beta * |h_k_dkm1| <= (2/mu) * (-h_k_vk).
    assert beta * abs(h_k_dkm1) <= (2.0 / mu) * (-h_k_vk) * (1.0 + 1e-12)


def test_scalar_reduction_matches_gradient_formula():
    # For a single scalar objective of one variable the rule collapses
    # to a pure gradient expression; check agreement on random data.
    rng = np.random.default_rng(11)
    mu = 2.4
    for _ in range(1000):
        g_k, g_km1, d_km1 = rng.uniform(-5.0, 5.0, size=3)
        if abs(g_k) < 1e-6 or abs(g_km1) < 1e-6 or abs(d_km1) < 1e-6:
            continue
        # h(x, d) = g d and v(x) = -g in the one-dimensional case.
        beta = compute_beta(
            "mprp",
            h_k_vk=-g_k * g_k,
            h_km1_vk=-g_km1 * g_k,
            h_k_dkm1=g_k * d_km1,
            h_km1_vkm1=-g_km1 * g_km1,
            h_km1_dkm1=g_km1 * d_km1,
            mu=mu,
        )
        num = g_k * (abs(g_km1) * g_k - abs(g_k) * g_km1)
        den = max(mu * abs(g_km1) ** 3,
                  mu * abs(g_k) * abs(g_km1) * abs(d_km1))
        assert beta == pytest.approx(num / den, rel=1e-12, abs=1e-15)


# ---------------------------------------------------------------------------
# comparison rules: hand values from VALS


def test_prp_hand_value():
    assert beta_prp(-1.0, 0.5, -0.8) == pytest.approx(1.875)


def test_prp_plus_clips_at_zero():
    assert beta_prp_plus(-1.25) == 0.0
    assert beta_prp_plus(0.7) == 0.7


def test_compute_beta_hand_values():
    assert compute_beta("fr", mu=2.4, **VALS) == pytest.approx(0.5)
    assert compute_beta("cd", mu=2.4, **VALS) == pytest.approx(2.0)
    assert compute_beta("dy", mu=2.4, **VALS) == pytest.approx(1.0 / 1.5)
    assert compute_beta("prp", mu=2.4, **VALS) == pytest.approx(1.5)
    assert compute_beta("hs", mu=2.4, **VALS) == pytest.approx(2.0)
    assert compute_beta("sd", mu=2.4, **VALS) == 0.0


def test_compute_beta_prp_plus_negative_case():
    vals = dict(VALS, h_km1_vk=-3.0)
    assert compute_beta("prp", mu=2.4, **vals) == pytest.approx(-1.0)
    assert compute_beta("prp+", mu=2.4, **vals) == 0.0


def test_compute_beta_unknown_method():
    with pytest.raises(ConfigurationError):
        compute_beta("nope", mu=2.4, **VALS)


def test_degenerate_denominator_raises():
    vals = dict(VALS, h_km1_vkm1=0.0)
    with pytest.raises(DegenerateBetaError):
        compute_beta("fr", mu=2.4, **vals)
    with pytest.raises(DegenerateBetaError):
        compute_beta("prp", mu=2.4, **vals)
    # DY/HS share the denominator h_k_dkm1 - h_km1_dkm1.
    vals = dict(VALS, h_k_dkm1=-0.5)
    with pytest.raises(DegenerateBetaError):
        compute_beta("dy", mu=2.4, **vals)
    with pytest.raises(DegenerateBetaError):
        compute_beta("hs", mu=2.4, **vals)


@settings(max_examples=200)
@given(
    h_k_vk=st.floats(-1e3, -1e-6, allow_nan=False),
    h_km1_vk=st.floats(-1e3, 1e3, allow_nan=False),
    h_k_dkm1=_nonzero_floats(-1e3, 1e3),
    h_km1_vkm1=st.floats(-1e3, -1e-3, allow_nan=False),
    h_km1_dkm1=st.floats(-1e3, -1e-3, allow_nan=False),
)
def test_nonnegative_methods_never_negative(h_k_vk, h_km1_vk, h_k_dkm1,
                                            h_km1_vkm1, h_km1_dkm1):
    for method in NONNEGATIVE_METHODS:
        beta = compute_beta(method, h_k_vk=h_k_vk, h_km1_vk=h_km1_vk,
                            h_k_dkm1=h_k_dkm1, h_km1_vkm1=h_km1_vkm1,
                            h_km1_dkm1=h_km1_dkm1, mu=2.4)
        assert beta >= 0.0, method


def test_all_methods_dispatch():
    for method in METHODS:
        beta = compute_beta(method, mu=2.4, **VALS)
        assert np.isfinite(beta)


# ---------------------------------------------------------------------------
# direction recurrence


def test_direction_update_first_iteration():
    v = np.array([1.0, -2.0])
    d = direction_update(v, 0.0)
    np.testing.assert_array_equal(d, v)
    assert d is not v  # defensive copy


def test_direction_update_recurrence():
    v = np.array([1.0, -2.0])
    d_prev = np.array([0.5, 0.5])
    np.testing.assert_allclose(direction_update(v, 2.0, d_prev), [2.0, -1.0])


@settings(max_examples=100)
@given(
    st.lists(st.floats(-10, 10, allow_nan=False), min_size=3, max_size=3),
    st.lists(st.floats(-10, 10, allow_nan=False), min_size=3, max_size=3),
    st.floats(0.0, 10.0, allow_nan=False),
)
def test_h_sublinear_along_update(v_list, d_list, beta):
    # h(x, v + beta d) <= h(x, v) + beta h(x, d) for beta >= 0: the
    # reason nonnegative rules inherit descent bounds.
    cone = nonneg_orthant(2)
    J = np.array([[1.0, 0.5, -0.25], [-0.3, 2.0, 1.0]])
    v = np.array(v_list)
    d_prev = np.array(d_list)
    combo = direction_update(v, beta, d_prev)
    lhs = h(J, combo, cone)
    rhs = h(J, v, cone) + beta * h(J, d_prev, cone)
    assert lhs <= rhs + 1e-9 * (1.0 + abs(rhs))
