"""Monotone envelopes of (sin x / x)^2 on [0, inf).

``g_minus`` keeps the main lobe and drops everything past pi. ``g_plus`` is the
sunrise of the graph seen from the right: it follows the curve while the curve
is above every later local maximum, and is flat at the next maximum's height
otherwise. L- and L+ are (2/pi) times their integrals.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import sici

from .kernels import sin_over
from .numerics import Tolerance, find_root, integrate

__all__ = [
    "SunriseDecomposition",
    "ReducedPrecisionWarning",
    "tan_fixed_point",
    "build_decomposition",
    "g_plus",
    "g_minus",
    "L_minus",
    "L_plus",
    "l_plus_estimate",
    "DEFAULT_DEPTH",
]

DEFAULT_DEPTH = 200
_ROOT_TOL = Tolerance(1e-15, 4.5e-16 * 4, 200)


class ReducedPrecisionWarning(UserWarning):
    """g_plus was evaluated past the resolved lobes; the 1/x^2 envelope was used."""


def _sq(x):
    s = sin_over(x)
    return s * s


def tan_fixed_point(k: int) -> float:
    """k-th positive root of tan x = x, lying in (k pi, (k + 1/2) pi)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    lo, hi = k * math.pi, (k + 0.5) * math.pi
    # x cos x - sin x has the sign of tan x - x times cos x; no pole inside
    f = lambda x: x * math.cos(x) - math.sin(x)
    return find_root(f, (lo + 1e-12, hi - 1e-12), _ROOT_TOL)


def _sinc2_integral(a: float, b: float) -> float:
    """Exact integral of (sin x / x)^2 over [a, b] via the sine integral."""
    def anti(x):
        if x == 0.0:
            return 0.0
        return sici(2 * x)[0] - math.sin(x) ** 2 / x
    return anti(b) - anti(a)


@dataclass(frozen=True)
class SunriseDecomposition:
    maxima: np.ndarray  # m_0 = 0 < m_1 < ... < m_K
    crossings: np.ndarray  # a_1 .. a_K, a_k in (m_{k-1}, m_k)
    depth: int

    @property
    def plateaus(self) -> np.ndarray:
        """Heights (sin m_k / m_k)^2 = 1/(1 + m_k^2) for k = 1..K."""
        m = self.maxima[1:]
        return 1.0 / (1.0 + m * m)

    @property
    def reach(self) -> float:
        return float(self.maxima[-1])


def build_decomposition(K: int = DEFAULT_DEPTH) -> SunriseDecomposition:
    if K < 1:
        raise ValueError("depth K must be >= 1")
    maxima = np.array([0.0] + [tan_fixed_point(k) for k in range(1, K + 1)])
    crossings = np.empty(K)
    for k in range(1, K + 1):
        level = 1.0 / (1.0 + maxima[k] ** 2)
        # falling branch between the previous maximum and the zero at k pi
        crossings[k - 1] = find_root(lambda x: _sq(x) - level, (maxima[k - 1], k * math.pi), _ROOT_TOL)
    maxima.setflags(write=False)
    crossings.setflags(write=False)
    return SunriseDecomposition(maxima, crossings, K)


def _check_x(x):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("sunrise functions are defined for x >= 0")
    return x


def g_minus(x):
    """(sin x/x)^2 on [0, pi], zero beyond."""
    x = _check_x(x)
    out = np.where(x <= math.pi, _sq(x), 0.0)
    return out if out.ndim else float(out)


def g_plus(x, dec: SunriseDecomposition):
    x = _check_x(x)
    k = np.searchsorted(dec.maxima, x, side="right")  # x in [m_{k-1}, m_k)
    inside = k <= dec.depth
    kk = np.clip(k, 1, dec.depth)
    a = dec.crossings[kk - 1]
    plateau = dec.plateaus[kk - 1]
    on_curve = x < a
    out = np.where(on_curve, _sq(x), plateau)
    if not np.all(inside):
        warnings.warn(f"g_plus evaluated beyond x = {dec.reach:.6g}; using 1/x^2",
                      ReducedPrecisionWarning, stacklevel=2)
        safe = np.where(inside, 1.0, x)
        out = np.where(inside, out, 1.0 / (safe * safe))
    return out if out.ndim else float(out)


def L_minus(tol: Tolerance = Tolerance(1e-13, 1e-12)) -> float:
    return 2.0 / math.pi * integrate(lambda t: float(_sq(t)), 0.0, math.pi, tol)


def _tail_model(m: float) -> float:
    """Integral of g_plus over [m_K, inf): the staircase of the envelope
    1/(1+x^2) at spacing pi, plus the parabolic caps above each plateau."""
    stairs = (0.5 * math.pi - math.atan(m)) - 0.5 * math.pi / (1.0 + m * m)
    caps = _cap_excess(m)
    return stairs + caps


def _cap_excess(m: float) -> float:
    # each cap has area ~ (2/3)(2 pi)^{3/2} m^{-7/2}; summed with spacing pi
    return (2.0 / 3.0) * (2 * math.pi) ** 1.5 / (2.5 * math.pi) * m ** -2.5


def l_plus_estimate(dec: SunriseDecomposition) -> tuple[float, float]:
    """Return (L+, error bound).

    The resolved lobes are integrated exactly; the rest uses ``_tail_model``.
    The cap term is counted one and a half times, so the estimate sits above
    the limit and decreases as the depth grows. The reported error is that
    surplus plus the size of the neglected O(m^-3) corrections.
    """
    m, a = dec.maxima, dec.crossings
    lobes = [_sinc2_integral(m[k - 1], a[k - 1]) + dec.plateaus[k - 1] * (m[k] - a[k - 1])
             for k in range(1, dec.depth + 1)]
    mk = float(m[-1])
    head = math.fsum(lobes)
    value = head + _tail_model(mk) + 0.5 * _cap_excess(mk)
    err = 0.5 * _cap_excess(mk) + math.pi ** 2 / mk ** 3
    return 2.0 / math.pi * value, 2.0 / math.pi * err


def L_plus(depth: int = DEFAULT_DEPTH) -> float:
    return l_plus_estimate(build_decomposition(depth))[0]
