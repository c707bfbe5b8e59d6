"""Shared numerical routines: root finding, quadrature, 1-D and simplex minimization.

Every routine takes a :class:`Tolerance` and raises a subclass of
:class:`NumericsError` instead of returning a silent best guess.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate as _spi
from scipy import optimize as _spo

__all__ = [
    "Tolerance",
    "Bracket",
    "DEFAULT_TOL",
    "NumericsError",
    "BracketError",
    "ConvergenceError",
    "QuadratureError",
    "SearchAborted",
    "SimplexResult",
    "find_root",
    "integrate",
    "minimize_1d",
    "minimize_simplex",
    "series_sum",
    "grid_size",
]


class NumericsError(ArithmeticError):
    pass


class BracketError(NumericsError):
    pass


class ConvergenceError(NumericsError):
    pass


class QuadratureError(NumericsError):
    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(f"{message} (partial estimate {estimate!r}, error {error:.3g})")
        self.estimate = estimate
        self.error = error


class SearchAborted(NumericsError):
    def __init__(self, message: str, trace: list[float]):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class Tolerance:
    abs: float = 1e-12
    rel: float = 1e-10
    max_iter: int = 200

    def __post_init__(self):
        if self.abs < 0 or self.rel < 0 or self.abs + self.rel <= 0:
            raise ValueError("tolerance needs abs >= 0, rel >= 0 and abs + rel > 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")

    def bound(self, value: float) -> float:
        return max(self.abs, self.rel * abs(value))


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise BracketError(f"empty bracket [{self.lo}, {self.hi}]")


def _as_bracket(b) -> Bracket:
    return b if isinstance(b, Bracket) else Bracket(float(b[0]), float(b[1]))


def find_root(f: Callable[[float], float], bracket, tol: Tolerance = DEFAULT_TOL) -> float:
    """Brent's method (bisection safeguarded secant/inverse quadratic steps)."""
    br = _as_bracket(bracket)
    flo, fhi = f(br.lo), f(br.hi)
    if flo == 0.0:
        return br.lo
    if fhi == 0.0:
        return br.hi
    if not (np.isfinite(flo) and np.isfinite(fhi)) or np.sign(flo) == np.sign(fhi):
        raise BracketError(f"no sign change on [{br.lo}, {br.hi}]: f = {flo!r}, {fhi!r}")
    # brentq's rtol must stay above 4 * machine epsilon
    rtol = max(tol.rel, 4.5 * np.finfo(float).eps)
    root, info = _spo.brentq(f, br.lo, br.hi, xtol=max(tol.abs, 1e-300), rtol=rtol,
                             maxiter=tol.max_iter, full_output=True, disp=False)
    if not info.converged:
        raise ConvergenceError(f"root finder stopped after {info.iterations} iterations: {info.flag}")
    return float(root)


def _finite_quad(f, a, b, tol: Tolerance, points: Sequence[float]) -> tuple[float, float]:
    inner = sorted(p for p in points if a < p < b)
    edges = [a, *inner, b]
    total, err = [], 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, e, *_ = _spi.quad(f, lo, hi, epsabs=tol.abs, epsrel=tol.rel,
                               limit=tol.max_iter, full_output=1)
        total.append(val)
        err += e
    return math.fsum(total), err


# cap on unit panels for infinite ranges; beyond this the tail model is not converging
_MAX_PANELS = 1 << 17


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: Tolerance = DEFAULT_TOL,
    points: Sequence[float] = (),
    tail_exponent: float = 2.0,
    period: float = 1.0,
) -> float:
    """Adaptive Gauss-Kronrod quadrature of ``f`` over ``[a, b]``.

    ``points`` are breakpoints where ``f`` is not smooth. For ``b = inf`` the
    integrand must decay like ``x**-tail_exponent``; the range is cut into
    panels of length ``period`` (align it with any oscillation of ``f``), the
    cut-off ``R`` is doubled, and the ``R**(1 - tail_exponent)`` tail term is
    removed by Richardson extrapolation until two extrapolants agree.
    """
    if math.isinf(a):
        raise ValueError("lower endpoint must be finite")
    if b < a:
        return -integrate(f, b, a, tol, points, tail_exponent, period)
    if not math.isinf(b):
        val, err = _finite_quad(f, a, b, tol, points)
        if err > 10 * tol.bound(val):
            raise QuadratureError(f"quadrature on [{a}, {b}] did not converge", val, err)
        return val

    if tail_exponent <= 1:
        raise ValueError("tail_exponent must exceed 1 for an infinite range")
    inner_tol = Tolerance(tol.abs / 10, tol.rel / 10, max(tol.max_iter, 100))
    # start past every breakpoint so the tail model applies
    start = max([a, *points])
    n_head = math.ceil((start - a) / period) + 8
    panel_edges = a + period * np.arange(n_head + 1)
    acc = [_finite_quad(f, lo, hi, inner_tol, points)[0]
           for lo, hi in zip(panel_edges[:-1], panel_edges[1:])]
    r_prev, i_prev = panel_edges[-1], math.fsum(acc)
    extrap_prev = None
    n = n_head
    while n < _MAX_PANELS:
        n_new = 2 * n
        edges = a + period * np.arange(n, n_new + 1)
        acc.extend(_finite_quad(f, lo, hi, inner_tol, ())[0] for lo, hi in zip(edges[:-1], edges[1:]))
        r_new, i_new = edges[-1], math.fsum(acc)
        ratio = (r_new / r_prev) ** (tail_exponent - 1.0) if r_prev > 0 else 2.0
        extrap = i_new + (i_new - i_prev) / (ratio - 1.0)
        if extrap_prev is not None and abs(extrap - extrap_prev) <= tol.bound(extrap):
            return extrap
        extrap_prev, r_prev, i_prev, n = extrap, r_new, i_new, n_new
    raise QuadratureError("tail extrapolation did not settle", extrap_prev, abs(extrap - extrap_prev))


def grid_size(lo: float, hi: float) -> int:
    return max(64, math.ceil(16 * (hi - lo) / math.pi))


def minimize_1d(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: Tolerance = DEFAULT_TOL,
    grid: int | None = None,
    vectorized: bool = False,
) -> tuple[float, float]:
    """Uniform grid scan over ``[lo, hi]`` followed by a bounded Brent polish
    around the best grid point. Pass ``grid`` for multimodal functions."""
    if not lo < hi:
        raise ValueError(f"degenerate interval [{lo}, {hi}]")
    n = grid or grid_size(lo, hi)
    xs = np.linspace(lo, hi, n + 1)
    vals = np.asarray(f(xs) if vectorized else [f(x) for x in xs], dtype=float)
    i = int(np.nanargmin(vals))
    left, right = xs[max(i - 1, 0)], xs[min(i + 1, n)]
    res = _spo.minimize_scalar(
        f, bounds=(left, right), method="bounded",
        options={"xatol": max(tol.abs, 1e-14), "maxiter": max(tol.max_iter, 500)},
    )
    x_best, f_best = float(xs[i]), float(vals[i])
    if float(res.fun) <= f_best:
        x_best, f_best = float(res.x), float(res.fun)
    return x_best, f_best


@dataclass
class SimplexResult:
    x: np.ndarray
    fun: float
    trace: list[float] = field(default_factory=list)
    nfev: int = 0
    converged: bool = False


def minimize_simplex(
    f: Callable[[np.ndarray], float],
    start: Sequence[float],
    scale: float = 1.0,
    tol: Tolerance = Tolerance(1e-12, 1e-12, 2000),
    seed: int = 0,
) -> SimplexResult:
    """Nelder-Mead downhill simplex.

    The initial simplex is ``start`` plus ``scale`` times the columns of a
    random rotation drawn from ``seed``; the same inputs reproduce the same
    trace bit for bit. ``trace`` holds the best value after each iteration.
    """
    x0 = np.atleast_1d(np.asarray(start, dtype=float))
    d = x0.size
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    q = q * np.sign(np.diag(r))
    simplex = np.vstack([x0, x0 + scale * q.T])
    trace: list[float] = []
    nfev = 0

    def call(x):
        nonlocal nfev
        nfev += 1
        v = float(f(x))
        if not math.isfinite(v):
            raise SearchAborted(f"objective returned {v} at {x.tolist()}", trace)
        return v

    fvals = np.array([call(x) for x in simplex])
    alpha, gamma, rho, sigma = 1.0, 2.0, 0.5, 0.5
    converged = False
    for _ in range(tol.max_iter):
        order = np.argsort(fvals, kind="stable")
        simplex, fvals = simplex[order], fvals[order]
        trace.append(float(fvals[0]))
        spread = fvals[-1] - fvals[0]
        size = np.max(np.abs(simplex[1:] - simplex[0]))
        if spread <= tol.bound(fvals[0]) and size <= max(tol.abs, tol.rel * np.max(np.abs(simplex[0]))) * 1e4:
            converged = True
            break
        centroid = simplex[:-1].mean(axis=0)
        xr = centroid + alpha * (centroid - simplex[-1])
        fr = call(xr)
        if fr < fvals[0]:
            xe = centroid + gamma * (xr - centroid)
            fe = call(xe)
            simplex[-1], fvals[-1] = (xe, fe) if fe < fr else (xr, fr)
        elif fr < fvals[-2]:
            simplex[-1], fvals[-1] = xr, fr
        else:
            if fr < fvals[-1]:
                xc = centroid + rho * (xr - centroid)
            else:
                xc = centroid + rho * (simplex[-1] - centroid)
            fc = call(xc)
            if fc < min(fr, fvals[-1]):
                simplex[-1], fvals[-1] = xc, fc
            else:
                simplex[1:] = simplex[0] + sigma * (simplex[1:] - simplex[0])
                fvals[1:] = [call(x) for x in simplex[1:]]
    i = int(np.argmin(fvals))
    return SimplexResult(simplex[i].copy(), float(fvals[i]), trace, nfev, converged)


def series_sum(
    term: Callable[[np.ndarray], np.ndarray],
    n_max: int,
    start: int = 1,
    tail: Callable[[float], float] | None = None,
) -> float:
    """Sum ``term(n)`` for ``start <= n <= n_max`` (vectorized, compensated)
    and add ``tail(n_max + 1/2)``, the midpoint-rule estimate of the rest
    (typically the integral of the term from that point to infinity)."""
    total = 0.0
    parts = []
    block = 1 << 16
    for lo in range(start, n_max + 1, block):
        ns = np.arange(lo, min(lo + block, n_max + 1), dtype=float)
        parts.append(math.fsum(term(ns)))
    total = math.fsum(parts)
    if tail is not None:
        total += tail(n_max + 0.5)
    return total
