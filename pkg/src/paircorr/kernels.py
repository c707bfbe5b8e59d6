"""Fejér, Dirichlet and Poisson kernels, the Dirichlet minima m(n), and the
large-n envelope for m(n)/n.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .numerics import Tolerance, minimize_1d

__all__ = [
    "sin_over",
    "sinc",
    "fejer_eval",
    "fejer_ft",
    "rho_fejer",
    "dirichlet_eval",
    "dirichlet_cosine_sum",
    "dirichlet_min",
    "c0",
    "x1",
    "Envelope",
    "dirichlet_envelope",
    "poisson_eval",
    "poisson_ft",
    "poisson_majorant_eval",
    "poisson_majorant_ft",
    "ENVELOPE_UPPER_CONST",
    "FejerKernel",
]

_TAYLOR_CUT = 1e-4
ENVELOPE_UPPER_CONST = 5.4935


def sin_over(y):
    """sin(y)/y with a Taylor branch near the removable point."""
    y = np.asarray(y, dtype=float)
    small = np.abs(y) < _TAYLOR_CUT
    safe = np.where(small, 1.0, y)
    y2 = y * y
    out = np.where(small, 1.0 - y2 / 6.0 + y2 * y2 / 120.0, np.sin(safe) / safe)
    return out if out.ndim else float(out)


def sinc(x):
    """Normalized sinc, sin(pi x)/(pi x)."""
    return sin_over(np.pi * np.asarray(x, dtype=float))


def _check_delta(delta: float):
    if not 0.0 < delta <= 1.0:
        raise ValueError(f"Fejer bandwidth must lie in (0, 1], got {delta}")


def fejer_eval(delta: float, x):
    _check_delta(delta)
    s = sinc(delta * np.asarray(x, dtype=float))
    return delta * s * s


def fejer_ft(delta: float, xi):
    """Triangle (1 - |xi|/delta)_+ of base 2*delta."""
    _check_delta(delta)
    out = np.maximum(0.0, 1.0 - np.abs(np.asarray(xi, dtype=float)) / delta)
    return out if out.ndim else float(out)


def rho_fejer(delta: float) -> float:
    _check_delta(delta)
    return 1.0 + delta * delta / 3.0


def dirichlet_eval(n: int, x):
    """D_n(x) = sin((n + 1/2) x) / sin(x / 2)."""
    if n < 0:
        raise ValueError("Dirichlet degree must be >= 0")
    x = np.asarray(x, dtype=float)
    # reduce to (-pi, pi] so the removable point sits at 0
    r = np.remainder(x + np.pi, 2 * np.pi) - np.pi
    a = 2 * n + 1
    y = 0.5 * r
    small = np.abs(a * y) < _TAYLOR_CUT
    safe = np.where(small, 1.0, y)
    u = y * y
    a2 = float(a * a)
    taylor = a * (1.0 + u * (1.0 - a2) / 6.0 + u * u * (7.0 / 360.0 - a2 / 36.0 + a2 * a2 / 120.0))
    out = np.where(small, taylor, np.sin(a * safe) / np.sin(safe))
    return out if out.ndim else float(out)


def dirichlet_cosine_sum(n: int, x):
    """Reference evaluation 1 + 2 sum_{k<=n} cos(kx)."""
    x = np.asarray(x, dtype=float)
    k = np.arange(1, n + 1, dtype=float)
    out = 1.0 + 2.0 * np.cos(np.multiply.outer(x, k)).sum(axis=-1)
    return out if np.ndim(out) else float(out)


_memo_lock = threading.Lock()


@lru_cache(maxsize=None)
def _dirichlet_min_cached(n: int) -> float:
    if n == 0:
        return 1.0
    grid = max(64, 8 * (2 * n + 1))  # 16 samples per oscillation on [0, pi]
    _, val = minimize_1d(lambda x: dirichlet_eval(n, x), 0.0, math.pi,
                         Tolerance(1e-15, 1e-13, 500), grid=grid, vectorized=True)
    return float(val)


def dirichlet_min(n: int) -> float:
    """Global minimum m(n) of D_n over the real line (equivalently [0, pi])."""
    if n < 0:
        raise ValueError("Dirichlet degree must be >= 0")
    with _memo_lock:
        return _dirichlet_min_cached(int(n))


@lru_cache(maxsize=1)
def _sinc_first_min() -> tuple[float, float]:
    return minimize_1d(sin_over, math.pi, 2 * math.pi, Tolerance(1e-15, 1e-14, 500),
                       vectorized=True)


def c0() -> float:
    """min over x of sin(x)/x."""
    with _memo_lock:
        return _sinc_first_min()[1]


def x1() -> float:
    """First positive minimizer of sin(x)/x, in (pi, 2 pi)."""
    with _memo_lock:
        return _sinc_first_min()[0]


@dataclass(frozen=True)
class Envelope:
    n: int
    lower: float
    upper: float
    ratio: float
    sandwich_ok: bool


def dirichlet_envelope(n: int, samples: int = 2048) -> Envelope:
    """Check 2c0 - (2pi-1)/n <= m(n)/n <= 2c0 + 5.4935/n together with the
    pointwise sandwich |D_n(x)/n - 1/n - 2 sin(nx)/(nx)| <= x on (0, pi]."""
    if n < 1:
        raise ValueError("envelope needs n >= 1")
    cc = c0()
    lower = 2 * cc - (2 * math.pi - 1) / n
    upper = 2 * cc + ENVELOPE_UPPER_CONST / n
    ratio = dirichlet_min(n) / n
    xs = np.concatenate([np.linspace(math.pi / samples, math.pi, samples), [x1() / n]])
    xs = xs[xs <= math.pi]
    dn = dirichlet_eval(n, xs) / n
    mid = 1.0 / n + 2.0 * sin_over(n * xs)
    slack = 1e-12 * max(1.0, 2 * n)
    pointwise = bool(np.all(np.abs(dn - mid) <= xs + slack))
    # the upper constant is realised by the sample at x1/n
    at_x1 = dirichlet_eval(n, x1() / n) <= n * upper + slack if x1() / n <= math.pi else True
    ok = lower <= ratio <= upper and pointwise and bool(at_x1)
    return Envelope(n, lower, upper, ratio, ok)


def _check_b(b: float):
    if not b > 0:
        raise ValueError(f"Poisson scale must be positive, got {b}")


def poisson_eval(b: float, x):
    _check_b(b)
    x = np.asarray(x, dtype=float)
    return b / (b * b + x * x)


def poisson_ft(b: float, alpha):
    _check_b(b)
    return np.pi * np.exp(-2 * np.pi * b * np.abs(np.asarray(alpha, dtype=float)))


def poisson_majorant_eval(b: float, x):
    """Bandlimited majorant m_b of the Poisson kernel.

    Written as h_b(x) * (1 + sin^2(pi x) / sinh^2(pi b)), which equals the
    exponential form algebraically and does not overflow for large b.
    """
    _check_b(b)
    x = np.asarray(x, dtype=float)
    s = np.sin(np.pi * x)
    return poisson_eval(b, x) * (1.0 + s * s / math.sinh(math.pi * b) ** 2)


def poisson_majorant_ft(b: float, alpha):
    """(pi/2) sinh(2 pi b (1-|alpha|)) / sinh^2(pi b) on [-1, 1], else 0."""
    _check_b(b)
    t = np.abs(np.asarray(alpha, dtype=float))
    B = math.pi * b
    A = 2 * B * (1.0 - np.minimum(t, 1.0))
    # sinh(A)/sinh(B)^2 = 2 (e^{A-2B} - e^{-A-2B}) / (1 - e^{-2B})^2
    val = 2.0 * (np.exp(A - 2 * B) - np.exp(-A - 2 * B)) / (-np.expm1(-2 * B)) ** 2
    out = np.where(t <= 1.0, 0.5 * np.pi * val, 0.0)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class FejerKernel:
    """K_Delta and its triangle transform, packaged for configurations."""

    delta: float

    def __post_init__(self):
        _check_delta(self.delta)

    def __call__(self, x):
        return fejer_eval(self.delta, x)

    def ft(self, xi):
        return fejer_ft(self.delta, xi)

    @property
    def support(self) -> float:
        return self.delta

    @property
    def knots(self) -> tuple[float, ...]:
        return (-self.delta, 0.0, self.delta)

    def g0(self) -> float:
        return self.delta

    def rho(self) -> float:
        return rho_fejer(self.delta)
