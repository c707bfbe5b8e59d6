"""Envelopes for the second moment of the logarithmic derivative of zeta.

All quantities are coefficients of T log^2 T as functions of the shift a > 0.
U+- are the bounds obtained from the Poisson-kernel majorant and the
pair-correlation lower bound, V+- are the older bounds, and G+- are U+-
divided by the conjectured coefficient (1 - e^{-2a}) / (4a^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import Tolerance, find_root, integrate, minimize_1d

__all__ = [
    "MomentEnvelope",
    "u_minus",
    "u_plus",
    "v_minus",
    "v_plus",
    "conjectured",
    "g_curves",
    "envelope",
    "g_minus_min",
    "g_plus_max",
    "g_minus_crossing",
    "g_plus_crossing",
    "frak_i_lower",
    "frak_i_exp_identity",
    "SERIES_CUTOFF",
]

SERIES_CUTOFF = 1e-2
_R3 = 1.0 / math.sqrt(3.0)

# Laurent coefficients of U+ (powers -1, 0, 1, 3, 5, 7)
_UP_SERIES = ((-1, 2 / 3), (0, -0.5), (1, 13 / 90), (3, -1 / 126), (5, 1 / 1575), (7, -7 / 133650))
# Taylor coefficients of (1 - (1 + 2a) e^{-2a}) / (4a^2)
_E_SERIES = (0.5, -2 / 3, 0.5, -4 / 15, 1 / 9, -4 / 105, 1 / 90, -8 / 2835)


def _check(a):
    a = np.asarray(a, dtype=float)
    if np.any(~(a > 0)):
        raise ValueError("a must be positive")
    return a


def _ret(x):
    return x if np.ndim(x) else float(x)


def _lead(a: np.ndarray) -> np.ndarray:
    small = a < SERIES_CUTOFF
    s = np.where(small, a, 1.0)
    series = np.polynomial.polynomial.polyval(s, _E_SERIES)
    big = np.where(small, 1.0, a)
    direct = (-np.expm1(-2 * big) - 2 * big * np.exp(-2 * big)) / (4 * big * big)
    return np.where(small, series, direct)


def u_minus(a):
    a = _check(a)
    return _ret(_lead(a) + (0.5 / a + _R3) * np.exp(-2 * a * (1 + _R3)))


def _u_plus_direct(a: np.ndarray) -> np.ndarray:
    coth = 1.0 / np.tanh(a)
    csch2 = 1.0 / np.sinh(a) ** 2
    # coth(a)/2 - 1/2 = 1/(e^{2a} - 1), written without the cancellation
    return coth / (4 * a * a) - csch2 / (4 * a) + 1.0 / np.expm1(2 * a)


def _u_plus_series(a: np.ndarray) -> np.ndarray:
    return sum(c * a ** p for p, c in _UP_SERIES)


def u_plus(a):
    a = _check(a)
    small = a < SERIES_CUTOFF
    out = np.where(small, _u_plus_series(np.where(small, a, 1.0)),
                   _u_plus_direct(np.where(small, 1.0, a)))
    return _ret(out)


def v_minus(a):
    a = _check(a)
    return _ret(_lead(a) + 2.0 / (3.0 * np.exp(2 * a) * np.expm1(4 * a)))


def v_plus(a):
    a = _check(a)
    return _ret(_lead(a) + 29.0 / (12.0 * np.expm1(2 * a)))


def conjectured(a):
    """(1 - e^{-2a}) / (4 a^2)."""
    a = _check(a)
    return _ret(-np.expm1(-2 * a) / (4 * a * a))


def g_curves(a):
    """(G-, G+) at a."""
    a = _check(a)
    c = -np.expm1(-2 * a) / (4 * a * a)
    return _ret(np.asarray(u_minus(a)) / c), _ret(np.asarray(u_plus(a)) / c)


@dataclass(frozen=True)
class MomentEnvelope:
    a: float
    u_minus: float
    u_plus: float
    v_minus: float
    v_plus: float
    g_minus: float
    g_plus: float


def envelope(a: float) -> MomentEnvelope:
    gm, gp = g_curves(a)
    return MomentEnvelope(float(a), u_minus(a), u_plus(a), v_minus(a), v_plus(a), gm, gp)


_OPT_TOL = Tolerance(1e-12, 1e-12, 500)


def g_minus_min(lo: float = 0.05, hi: float = 6.0) -> tuple[float, float]:
    """(argmin, min) of G-."""
    return minimize_1d(lambda a: g_curves(a)[0], lo, hi, _OPT_TOL, vectorized=True)


def g_plus_max(lo: float = 0.05, hi: float = 6.0) -> tuple[float, float]:
    """(argmax, max) of G+."""
    x, v = minimize_1d(lambda a: -np.asarray(g_curves(a)[1]), lo, hi, _OPT_TOL, vectorized=True)
    return x, -v


def g_minus_crossing(level: float = 0.999, bracket=(2.0, 10.0)) -> float:
    """Largest a where G- crosses ``level`` (G- stays above it afterwards)."""
    return find_root(lambda a: g_curves(a)[0] - level, bracket)


def g_plus_crossing(level: float = 1.001, bracket=(2.0, 10.0)) -> float:
    return find_root(lambda a: g_curves(a)[1] - level, bracket)


def frak_i_lower(xi):
    """Lower bound xi^2/2 - xi + 1/3 for the doubly integrated form factor."""
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 1):
        raise ValueError("xi must be >= 1")
    return _ret(xi * xi / 2 - xi + 1.0 / 3.0)


def frak_i_exp_identity(a: float, tol: Tolerance = Tolerance(1e-14, 1e-12)) -> tuple[float, float]:
    """Closed form and quadrature of 4a^2 int_{1+1/sqrt3}^inf (x^2/2 - x + 1/3) e^{-2ax} dx."""
    if not a > 0:
        raise ValueError("a must be positive")
    start = 1 + _R3
    closed = (0.5 / a + _R3) * math.exp(-2 * a * start)
    # substitute x = start + t; the integrand then decays like e^{-2at}
    scale = 1.0 / (2 * a)
    f = lambda t: (((start + t) ** 2) / 2 - (start + t) + 1 / 3) * math.exp(-2 * a * (start + t))
    cut = 60.0 * scale
    body = integrate(f, 0.0, cut, tol, points=[k * scale for k in range(1, 60)])
    # remainder beyond the cut is below e^{-120} times a polynomial factor
    return closed, 4 * a * a * body
