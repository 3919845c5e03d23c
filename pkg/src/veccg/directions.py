"""Conjugate parameters and the search-direction recurrence.

All coefficient rules are expressed through the scalarization values

    h_k_vk     = h(x^k,     v(x^k))
    h_km1_vk   = h(x^{k-1}, v(x^k))      (previous Jacobian, current v)
    h_k_dkm1   = h(x^k,     d^{k-1})     (current Jacobian, previous d)
    h_km1_vkm1 = h(x^{k-1}, v(x^{k-1}))
    h_km1_dkm1 = h(x^{k-1}, d^{k-1})

The cross terms come from the cached previous Jacobian, never from a
fresh evaluation, so each iteration costs exactly the Jacobian
evaluations its line search needs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_DENOM_FLOOR = 1e-300

METHODS = ("mprp", "prp", "prp+", "fr", "cd", "dy", "hs", "sd")

#: Methods whose coefficient is nonnegative by construction.
NONNEGATIVE_METHODS = ("mprp", "prp+", "sd")


class ConfigurationError(ValueError):
    """Invalid algorithmic parameter."""


class DegenerateBetaError(ArithmeticError):
    """A comparison method hit a vanishing denominator."""


@dataclass
class DirectionState:
    """Per-run cache of the previous iterate's direction data."""

    d_prev: np.ndarray
    J_prev: np.ndarray
    h_prev_vprev: float
    h_prev_dprev: float


def beta_mprp(h_k_vk, h_km1_vk, h_k_dkm1, h_km1_vkm1, mu):
    """Nonnegative modified PRP coefficient.

    Zero whenever h_km1_vk <= 0 (the numerator factor |b| + b vanishes
    for b < 0; the b = 0 case is the 0/0 convention).
    """
    if mu <= 2.0:
        raise ConfigurationError("mu must be > 2")
    if h_km1_vk <= 0.0:
        return 0.0
    num = -h_k_vk * (abs(h_km1_vk) + h_km1_vk)
    den = max(mu * abs(h_k_dkm1 * h_km1_vk), -mu * h_km1_vkm1 * abs(h_km1_vk))
    return num / den


def _guard(den):
    if abs(den) < _DENOM_FLOOR:
        raise DegenerateBetaError("conjugate-parameter denominator vanished")
    return den


def beta_prp(h_k_vk, h_km1_vk, h_km1_vkm1):
    return (-h_k_vk + h_km1_vk) / _guard(-h_km1_vkm1)


def beta_prp_plus(beta_prp_value):
    return max(0.0, beta_prp_value)


def beta_fr(h_k_vk, h_km1_vkm1):
    return h_k_vk / _guard(h_km1_vkm1)


def beta_cd(h_k_vk, h_km1_dkm1):
    return h_k_vk / _guard(h_km1_dkm1)


def beta_dy(h_k_vk, h_k_dkm1, h_km1_dkm1):
    return -h_k_vk / _guard(h_k_dkm1 - h_km1_dkm1)


def beta_hs(h_k_vk, h_km1_vk, h_k_dkm1, h_km1_dkm1):
    return (-h_k_vk + h_km1_vk) / _guard(h_k_dkm1 - h_km1_dkm1)


def compute_beta(method, *, h_k_vk, h_km1_vk, h_k_dkm1,
                 h_km1_vkm1, h_km1_dkm1, mu):
    """Dispatch the conjugate parameter for one iteration (k >= 1)."""
    if method == "mprp":
        return beta_mprp(h_k_vk, h_km1_vk, h_k_dkm1, h_km1_vkm1, mu)
    if method == "prp":
        return beta_prp(h_k_vk, h_km1_vk, h_km1_vkm1)
    if method == "prp+":
        return beta_prp_plus(beta_prp(h_k_vk, h_km1_vk, h_km1_vkm1))
    if method == "fr":
        return beta_fr(h_k_vk, h_km1_vkm1)
    if method == "cd":
        return beta_cd(h_k_vk, h_km1_dkm1)
    if method == "dy":
        return beta_dy(h_k_vk, h_k_dkm1, h_km1_dkm1)
    if method == "hs":
        return beta_hs(h_k_vk, h_km1_vk, h_k_dkm1, h_km1_dkm1)
    if method == "sd":
        return 0.0
    raise ConfigurationError(f"unknown method {method!r}; known: {', '.join(METHODS)}")


def direction_update(v_k, beta, d_prev=None):
    """Search direction: v_k at the first iteration, else v_k + beta * d_prev."""
    v_k = np.asarray(v_k, dtype=float)
    if d_prev is None:
        return v_k.copy()
    return v_k + beta * np.asarray(d_prev, dtype=float)
