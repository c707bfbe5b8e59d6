"""Explicit bounds for integrals of the form factor over finite windows.

Everything here is a T -> infinity coefficient: triangle bounds from stacks of
Fejér kernels, the symmetric bounds on [1, beta] built from Dirichlet-kernel
minima, their combination on a generic window, and a few derived constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Protocol, Sequence

import numpy as np

from .kernels import FejerKernel, c0, dirichlet_min, sin_over, sinc
from .numerics import Tolerance, integrate

__all__ = [
    "RhoValue",
    "Profile",
    "Part",
    "Configuration",
    "BoundCurve",
    "verify_configuration",
    "configuration_value",
    "upper_stack",
    "small_window_upper",
    "lower_stack",
    "c_plus_triangle",
    "c_minus_triangle",
    "g_n",
    "c_minus_symmetric",
    "argmax_n",
    "c_plus_symmetric",
    "c_bounds_interval",
    "conjectured_integral",
    "density_integral",
    "mollifier_lower_bound",
    "montgomery_taylor_constant",
    "montgomery_taylor_extremal",
    "rho_plancherel",
    "sample_curve",
    "LOWER_TRIANGLE_THRESHOLD",
]

# a Fejer triangle only helps a minorant when 2 Delta - 1 - Delta^2/3 >= 0
LOWER_TRIANGLE_THRESHOLD = 3.0 - math.sqrt(6.0)
_EPS = 1e-12


@dataclass(frozen=True)
class RhoValue:
    rho: float
    g0: float
    ghat0: float

    def __post_init__(self):
        if self.rho < -1e-12:
            raise ValueError(f"rho must be non-negative, got {self.rho}")


class Profile(Protocol):
    support: float
    knots: Sequence[float]

    def ft(self, xi): ...
    def g0(self) -> float: ...
    def rho(self) -> float: ...


@dataclass(frozen=True)
class Part:
    profile: Profile
    height: float
    shift: float

    def __post_init__(self):
        if not self.height > 0:
            raise ValueError("part heights must be positive")


@dataclass(frozen=True)
class Configuration:
    parts: tuple[Part, ...]
    b: float
    length: float

    def transform_sum(self, alpha):
        alpha = np.asarray(alpha, dtype=float)
        total = np.zeros_like(alpha)
        for p in self.parts:
            total = total + p.height * p.profile.ft(alpha - p.shift)
        return total


def verify_configuration(cfg: Configuration, side: str, grid: int = 4096) -> bool:
    """Check the transform sum against the indicator of [b, b + length].

    ``grid`` is the number of samples per unit length; every knot of every
    shifted profile and both window edges are added to the sample set.
    """
    if not cfg.parts:
        raise ValueError("empty configuration")
    if grid < 1000:
        raise ValueError("grid must be at least 1000 points per unit")
    if side not in ("majorize", "minorize"):
        raise ValueError(f"unknown side {side!r}")
    lo = min([cfg.b] + [p.shift - p.profile.support for p in cfg.parts]) - 1.0
    hi = max([cfg.b + cfg.length] + [p.shift + p.profile.support for p in cfg.parts]) + 1.0
    pts = [np.linspace(lo, hi, int(math.ceil((hi - lo) * grid)) + 1),
           [cfg.b, cfg.b + cfg.length]]
    for p in cfg.parts:
        pts.append(p.shift + np.asarray(p.profile.knots, dtype=float))
    alpha = np.unique(np.concatenate([np.asarray(x, dtype=float) for x in pts]))
    total = cfg.transform_sum(alpha)
    inside = (alpha >= cfg.b - _EPS) & (alpha <= cfg.b + cfg.length + _EPS)
    if side == "majorize":
        # the indicator is 1 on the closed window; allow the edge ulp either way
        core = (alpha >= cfg.b + _EPS) & (alpha <= cfg.b + cfg.length - _EPS)
        return bool(np.all(total[core] >= 1.0 - 1e-12) and np.all(total[inside] >= 1.0 - 1e-9))
    return bool(np.all(total[inside] <= 1.0 + 1e-12) and np.all(total[~inside] <= 1e-12))


def configuration_value(cfg: Configuration, side: str, grid: int = 4096) -> float:
    """sum height * rho(g) for majorants, sum height * (2 g(0) - rho(g)) for minorants."""
    if not verify_configuration(cfg, side, grid):
        raise ValueError(f"configuration does not {side} the window indicator")
    if side == "majorize":
        return math.fsum(p.height * p.profile.rho() for p in cfg.parts)
    return math.fsum(p.height * (2 * p.profile.g0() - p.profile.rho()) for p in cfg.parts)


def _frac(x: float) -> tuple[int, float]:
    n = math.floor(x)
    f = x - n
    # snap representation noise so integers are treated as integers
    if f < 1e-13:
        return n, 0.0
    if f > 1 - 1e-13:
        return n + 1, 0.0
    return n, f


def _stack(n: int, delta: float, b: float = 0.0) -> Configuration:
    parts = [Part(FejerKernel(delta), delta, b)]
    parts += [Part(FejerKernel(1.0), 1.0, b + (j - 2) + delta) for j in range(2, n + 2)]
    parts.append(Part(FejerKernel(delta), delta, b + (n - 1) + 2 * delta))
    return Configuration(tuple(parts), b, (n - 1) + 2 * delta)


def _stack_value(n: int, delta: float) -> float:
    return 4.0 * n / 3.0 + 2 * delta * (1 + delta * delta / 3.0)


def upper_stack(ell: float, b: float = 0.0) -> Configuration:
    """Unit triangles between two end triangles of height Delta, with
    (n - 1) + 2 Delta = ell; the cheaper of the admissible (n, Delta)."""
    if not ell > 0:
        raise ValueError("window length must be positive")
    k, f = _frac(ell)
    if f == 0.0:
        return _stack(k, 0.5, b)
    options = [(k + 1, f / 2), (k, (1 + f) / 2)]
    n, delta = min(options, key=lambda nd: _stack_value(*nd))
    return _stack(n, delta, b)


def _small_c(ell: float) -> float:
    return max(6 ** (-1.0 / 3.0) * ell ** (2.0 / 3.0), ell / (2 - ell))


def small_window_upper(ell: float, b: float = 0.0) -> Configuration:
    """One triangle of height 1 + c containing a unit-height segment of length ell."""
    if not 0 < ell <= 1:
        raise ValueError("the single-triangle majorant needs 0 < ell <= 1")
    c = _small_c(ell)
    delta = min(1.0, ell * (1 + c) / (2 * c))
    return Configuration((Part(FejerKernel(delta), 1 + c, b + ell / 2),), b, ell)


def lower_stack(ell: float, b: float = 0.0) -> Configuration | None:
    """Minorant stack; None when only the trivial bound 0 is available."""
    if not ell > 0:
        raise ValueError("window length must be positive")
    if ell < 2:
        d = ell / 2
        if d < LOWER_TRIANGLE_THRESHOLD:
            return None
        return Configuration((Part(FejerKernel(d), 1.0, b + d),), b, ell)
    k, f = _frac(ell)
    n = k - 1
    delta = (1 + f) / 2
    parts = [Part(FejerKernel(1.0), 1.0, b + j) for j in range(1, n + 1)]
    if delta >= LOWER_TRIANGLE_THRESHOLD:
        parts.append(Part(FejerKernel(delta), delta, b + n + delta))
    return Configuration(tuple(parts), b, ell)


def _upper_formula(f: float, ell: float) -> float:
    return 4.0 / 3.0 * (ell + 1) + f ** 3 / 12 - f / 3 - 0.25 * max(0.0, 1 - f - f * f)


def c_plus_triangle(ell: float) -> float:
    if not ell > 0:
        raise ValueError("ell must be positive")
    if ell >= 1:
        return _upper_formula(_frac(ell)[1], ell)
    c = _small_c(ell)
    alt = (1 + c) * (1 + ell * ell * (1 + c) ** 2 / (12 * c * c))
    return min(_upper_formula(ell, ell), alt)


def c_minus_triangle(ell: float) -> float:
    if not ell > 0:
        raise ValueError("ell must be positive")
    if ell <= 2:
        return max(0.0, ell - 1 - ell * ell / 12)
    f = _frac(ell)[1]
    return 2.0 / 3.0 * (ell - 1) - 2 * f / 3 + (1 + f) / 2 * max(0.0, f - (1 + f) ** 2 / 12)


def g_n(n: int, beta: float) -> float:
    """Lower bound for the [1, beta] integral from the n-th Dirichlet configuration."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not beta > 1:
        raise ValueError("beta must exceed 1")
    if n == 1:
        return min(max(0.0, beta + 2 / (3 * beta) - 2), 1.0 / 3.0)
    d = min(1.0, beta / n)
    return (n - 0.5) * d + dirichlet_min(n - 1) * (d * d / 6 - d / 2 + 0.5) - 1


def _n_range(beta: float) -> range:
    return range(1, math.ceil(13 * beta) + 1)


def c_minus_symmetric(beta: float) -> float:
    if not beta > 1:
        raise ValueError("beta must exceed 1")
    return max(g_n(n, beta) for n in _n_range(beta))


def argmax_n(beta: float) -> int:
    """Smallest n attaining the maximum of G_n(beta)."""
    if not beta > 1:
        raise ValueError("beta must exceed 1")
    vals = [g_n(n, beta) for n in _n_range(beta)]
    return 1 + int(np.argmax(vals))


def c_plus_symmetric(beta: float) -> float:
    if not beta > 1:
        raise ValueError("beta must exceed 1")
    return c_plus_triangle(2 * beta) / 2 - 1


def c_bounds_interval(b: float, beta: float) -> tuple[float, float]:
    """(lower, upper) for the integral over [b, beta], 1 <= b < beta.

    At b = 1 the symmetric bounds are used directly.
    """
    if not beta > b >= 1:
        raise ValueError("need beta > b >= 1")
    ell = beta - b
    if b == 1:
        return (max(c_minus_triangle(ell), c_minus_symmetric(beta)),
                min(c_plus_triangle(ell), c_plus_symmetric(beta)))
    lower = max(c_minus_triangle(ell), c_minus_symmetric(beta) - c_plus_symmetric(b))
    upper = min(c_plus_triangle(ell), c_plus_symmetric(beta) - c_minus_symmetric(b))
    return lower, upper


def density_integral(beta: float, tol: Tolerance = Tolerance(1e-12, 1e-11)) -> float:
    """Integral over [0, beta] of the pair correlation density 1 - sinc^2."""
    if beta < 0:
        raise ValueError("beta must be >= 0")
    if beta == 0:
        return 0.0
    pts = list(np.arange(1.0, beta, 1.0))
    tol = Tolerance(tol.abs, tol.rel, max(tol.max_iter, 50 * len(pts) + 200))
    return integrate(lambda u: 1.0 - float(sinc(u)) ** 2, 0.0, beta, tol, points=pts)


def conjectured_integral(beta: float) -> float:
    """Conjectured value beta - 1 of the integral of F over [1, beta]."""
    if not beta > 1:
        raise ValueError("beta must exceed 1")
    return beta - 1.0


def mollifier_lower_bound(theta: float) -> float:
    if not theta > 0:
        raise ValueError("theta must be positive")
    return 1.0 / (0.5 + c_plus_symmetric(1 + theta))


def montgomery_taylor_constant() -> float:
    s = 2 ** -0.5
    return 0.5 + s / math.tan(s)


def montgomery_taylor_extremal(x):
    """The extremal g (normalized to g(0) = 1) for the rho(g)/g(0) problem."""
    x = np.asarray(x, dtype=float)
    u = np.pi * x
    k = math.sqrt(2.0) / math.tan(2 ** -0.5)
    u0 = 2 ** -0.5
    h = 1e-6

    def ratio(v):
        return (np.cos(v) - k * v * np.sin(v)) / (1 - 2 * v * v)

    au = np.abs(u)
    near = np.abs(au - u0) < h
    safe = np.where(near, 0.0, au)
    r = np.where(near, 0.5 * (ratio(u0 - h) + ratio(u0 + h)), ratio(safe))
    out = r * r
    return out if out.ndim else float(out)


def rho_plancherel(g: Callable[[float], float], g0: float | None = None,
                   tol: Tolerance = Tolerance(1e-12, 1e-10), points: Sequence[float] = ()) -> float:
    """rho(g) = g(0) + integral of g (1 - sinc^2) for an even g with
    transform supported in [-1, 1]. The integrand must decay like x^-2."""
    g0 = float(g(0.0)) if g0 is None else g0
    body = integrate(lambda x: float(g(x)) * (1.0 - float(sinc(x)) ** 2), 0.0, math.inf,
                     tol, points=points, tail_exponent=2.0, period=1.0)
    return g0 + 2.0 * body


@dataclass
class BoundCurve:
    name: str
    kind: str
    samples: list[tuple[float, float]] = field(default_factory=list)
    provenance: str = ""

    def __post_init__(self):
        if self.kind not in ("upper", "lower", "reference"):
            raise ValueError(f"unknown curve kind {self.kind!r}")
        xs = [s[0] for s in self.samples]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("curve abscissae must be strictly increasing")

    @property
    def x(self) -> np.ndarray:
        return np.array([s[0] for s in self.samples])

    @property
    def y(self) -> np.ndarray:
        return np.array([s[1] for s in self.samples])


def sample_curve(name: str, kind: str, f: Callable[[float], float], lo: float, hi: float,
                 steps: int, provenance: str = "", max_jump: float = 0.05,
                 max_refine: int = 12) -> BoundCurve:
    """Sample ``f`` on a uniform grid, then bisect any gap whose values
    jump by ``max_jump`` or more."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    xs = list(np.linspace(lo, hi, steps + 1))
    ys = [f(x) for x in xs]
    for _ in range(max_refine):
        nx, ny, changed = [xs[0]], [ys[0]], False
        for x0, x1, y0, y1 in zip(xs, xs[1:], ys, ys[1:]):
            if abs(y1 - y0) >= max_jump:
                xm = 0.5 * (x0 + x1)
                nx.append(xm)
                ny.append(f(xm))
                changed = True
            nx.append(x1)
            ny.append(y1)
        xs, ys = nx, ny
        if not changed:
            break
    return BoundCurve(name, kind, list(zip(map(float, xs), map(float, ys))), provenance)
