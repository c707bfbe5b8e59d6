"""Coefficients of log^2 T / T in the bounds for the prime variance J(beta, T).

Only the T -> infinity coefficients are produced; no error terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import sunrise
from .epsearch import EP4_REFERENCE_POLY, EP5_REFERENCE_POLY, KreinProfile, ep4_objective, ep5_objective
from .fbounds import c_bounds_interval, c_minus_symmetric, c_plus_symmetric
from .kernels import c0

__all__ = [
    "JBound",
    "l_constants",
    "j_bounds",
    "j_interval_bounds",
    "asymptotic_slopes",
    "refined_slopes",
    "unit_step_slopes",
    "legacy_comparison",
    "PRIOR_WINDOW",
    "PRIOR_SLOPES",
]

# earlier constants: length-2 window (lower, upper) and large-beta slopes
PRIOR_WINDOW = (0.307, 21.647)
PRIOR_SLOPES = (0.153, 10.824)


@dataclass(frozen=True)
class JBound:
    beta: float
    lower_coeff: float
    upper_coeff: float

    def __post_init__(self):
        if self.lower_coeff > self.upper_coeff:
            raise ValueError("lower coefficient exceeds upper coefficient")
        if self.lower_coeff < 0:
            raise ValueError("lower coefficient must be non-negative")


@lru_cache(maxsize=1)
def l_constants() -> tuple[float, float]:
    """(L-, L+) from the sunrise envelopes."""
    return sunrise.L_minus(), sunrise.L_plus()


def j_bounds(beta: float) -> JBound:
    """Bounds for J(beta, T); the 1/2 is the contribution of [0, 1]."""
    if not beta > 1:
        raise ValueError("beta must exceed 1")
    lm, lp = l_constants()
    return JBound(beta, lm * c_minus_symmetric(beta) + 0.5, lp * c_plus_symmetric(beta) + 0.5)


def j_interval_bounds(b: float, beta: float) -> tuple[float, float]:
    """Bounds for J(beta, T) - J(b, T), beta > b > 1."""
    if not beta > b > 1:
        raise ValueError("need beta > b > 1")
    lm, lp = l_constants()
    lo, hi = c_bounds_interval(b, beta)
    return lm * lo, lp * hi


def asymptotic_slopes() -> tuple[float, float]:
    """Large-beta slopes of the closed-form bounds: L-(1 + c0/3) and (4/3) L+."""
    lm, lp = l_constants()
    return lm * (1 + c0() / 3), 4.0 / 3.0 * lp


def unit_step_slopes(beta: float) -> tuple[float, float]:
    """Increments of the j_bounds coefficients from beta to beta + 1."""
    a, b = j_bounds(beta), j_bounds(beta + 1)
    return b.lower_coeff - a.lower_coeff, b.upper_coeff - a.upper_coeff


def refined_slopes(ep4_value: float | None = None, ep5_value: float | None = None) -> tuple[float, float]:
    """L- times the ep5 objective value and L+ times the ep4 objective value.

    Defaults to the two fixed record polynomials.
    """
    if ep4_value is None:
        ep4_value = ep4_objective(KreinProfile(EP4_REFERENCE_POLY))
    if ep5_value is None:
        ep5_value = ep5_objective(KreinProfile(EP5_REFERENCE_POLY))
    lm, lp = l_constants()
    return lm * ep5_value, lp * ep4_value


def legacy_comparison(ep4_value: float | None = None, ep5_value: float | None = None) -> list[dict]:
    """Earlier constants next to the ones computed here."""
    lm, lp = l_constants()
    lo2, hi2 = j_interval_bounds(2.0, 4.0)
    s_lo, s_hi = asymptotic_slopes()
    r_lo, r_hi = refined_slopes(ep4_value, ep5_value)
    return [
        {"quantity": "window_2_lower", "prior": PRIOR_WINDOW[0], "computed": lo2, "reference": 2 / 3 * lm},
        {"quantity": "window_2_upper", "prior": PRIOR_WINDOW[1], "computed": hi2, "reference": 15 / 4 * lp},
        {"quantity": "slope_lower_closed_form", "prior": PRIOR_SLOPES[0], "computed": s_lo, "reference": 0.8374},
        {"quantity": "slope_upper_closed_form", "prior": PRIOR_SLOPES[1], "computed": s_hi, "reference": 1.431},
        {"quantity": "slope_lower_refined", "prior": PRIOR_SLOPES[0], "computed": r_lo, "reference": 0.8376},
        {"quantity": "slope_upper_refined", "prior": PRIOR_SLOPES[1], "computed": r_hi, "reference": 1.4283},
    ]
