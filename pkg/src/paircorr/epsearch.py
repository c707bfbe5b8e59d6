"""Krein polynomial profiles and the two periodized extremal objectives.

A profile is an even polynomial p on [-1/2, 1/2]; h has transform
p * chi[-1/2, 1/2] and g = |h|^2, so g-hat is the autocorrelation of that
truncated polynomial. Everything below is exact polynomial arithmetic: the
autocorrelation on [0, 1] is a single polynomial in alpha whose coefficients
are quadratic forms in the profile coefficients.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np
from numpy.polynomial import polynomial as P

from .fbounds import RhoValue
from .kernels import c0
from .numerics import Tolerance, minimize_simplex

__all__ = [
    "KreinProfile",
    "InfeasibleProfile",
    "SearchResult",
    "autocorrelate",
    "autocorrelation_poly",
    "periodization_poly",
    "rho_of",
    "ep4_objective",
    "ep5_objective",
    "search",
    "EP4_RECORD",
    "EP5_RECORD",
    "EP4_REFERENCE_POLY",
    "EP5_REFERENCE_POLY",
    "MAX_DEGREE",
]

MAX_DEGREE = 8
EP4_RECORD = 1.3302
EP5_RECORD = 0.9278
EP4_REFERENCE_POLY = (10.0, 2.0, -35.0)
EP5_REFERENCE_POLY = (5.0, -1.0)
_GRID = 1024


class InfeasibleProfile(ValueError):
    """The objective is undefined for this profile."""


@dataclass(frozen=True)
class KreinProfile:
    """Even polynomial p(alpha) = sum_k even[k] * alpha^(2k)."""

    even: tuple[float, ...]

    def __post_init__(self):
        ev = tuple(float(c) for c in self.even)
        if not ev:
            raise ValueError("profile needs at least one coefficient")
        if 2 * (len(ev) - 1) > MAX_DEGREE:
            raise ValueError(f"degree {2 * (len(ev) - 1)} exceeds {MAX_DEGREE}")
        if not all(math.isfinite(c) for c in ev):
            raise ValueError("profile coefficients must be finite")
        object.__setattr__(self, "even", ev)

    @property
    def degree(self) -> int:
        return 2 * (len(self.even) - 1)

    @property
    def coeffs(self) -> np.ndarray:
        """Full power-basis coefficients with the odd ones zero."""
        c = np.zeros(self.degree + 1)
        c[::2] = self.even
        return c

    def is_zero(self) -> bool:
        return not any(self.even)

    def __call__(self, alpha):
        return P.polyval(np.asarray(alpha, dtype=float), self.coeffs)

    # profile protocol used by configurations
    support = 1.0
    knots = (-1.0, 0.0, 1.0)

    def ft(self, xi):
        return autocorrelate(self, xi)

    def g0(self) -> float:
        return rho_of(self).g0

    def rho(self) -> float:
        return rho_of(self).rho


@lru_cache(maxsize=None)
def _monomial_table(d: int) -> np.ndarray:
    """M[i, j, :] = coefficients in alpha of int_{alpha-1/2}^{1/2} t^i (t-alpha)^j dt."""
    half = Fraction(1, 2)
    out = np.zeros((d + 1, d + 1, 2 * d + 2))
    for i in range(d + 1):
        for j in range(d + 1):
            acc = [Fraction(0)] * (2 * d + 2)
            for m in range(j + 1):
                k = i + m
                base = Fraction(comb(j, m)) * (-1) ** (j - m) / (k + 1)
                # alpha^(j-m) * [ (1/2)^(k+1) - (alpha - 1/2)^(k+1) ]
                acc[j - m] += base * half ** (k + 1)
                for r in range(k + 2):
                    acc[j - m + r] -= base * comb(k + 1, r) * (-half) ** (k + 1 - r)
            out[i, j, :] = [float(a) for a in acc]
    return out


def autocorrelation_poly(profile: KreinProfile) -> np.ndarray:
    """Coefficients of g-hat(alpha) on 0 <= alpha <= 1."""
    c = profile.coeffs
    M = _monomial_table(profile.degree)
    return np.einsum("i,j,ijk->k", c, c, M)


def periodization_poly(ghat: np.ndarray) -> np.ndarray:
    """P(alpha) = g-hat(alpha) + g-hat(1 - alpha) on [0, 1]."""
    return ghat + _reflection(ghat.size) @ ghat


@lru_cache(maxsize=None)
def _reflection(n: int) -> np.ndarray:
    """Matrix taking coefficients of q(alpha) to those of q(1 - alpha)."""
    R = np.zeros((n, n))
    for j in range(n):
        for k in range(j + 1):
            R[k, j] = comb(j, k) * (-1) ** k
    return R


def autocorrelate(profile: KreinProfile, alpha):
    """g-hat(alpha): zero for |alpha| > 1, even in alpha."""
    a = np.abs(np.asarray(alpha, dtype=float))
    vals = P.polyval(np.minimum(a, 1.0), autocorrelation_poly(profile))
    out = np.where(a <= 1.0, vals, 0.0)
    return out if out.ndim else float(out)


def rho_of(profile: KreinProfile) -> RhoValue:
    if profile.is_zero():
        raise ValueError("zero profile")
    return _rho_from(profile.coeffs, autocorrelation_poly(profile))


@lru_cache(maxsize=None)
def _moments(n: int) -> tuple[np.ndarray, np.ndarray]:
    k = np.arange(n)
    # int_0^1 alpha^(k+1) and int_{-1/2}^{1/2} alpha^k
    first = 1.0 / (k + 2)
    centred = np.where(k % 2 == 0, 2.0 * 0.5 ** (k + 1) / (k + 1), 0.0)
    return first, centred


def _rho_from(c: np.ndarray, ghat: np.ndarray) -> RhoValue:
    first, _ = _moments(ghat.size)
    _, centred = _moments(2 * c.size - 1)
    rho = ghat[0] + 2.0 * float(first @ ghat)
    integral_p = float(centred[: c.size] @ c)
    ghat0 = float(centred @ np.convolve(c, c))
    return RhoValue(float(rho), integral_p ** 2, ghat0)


_GRID_X = np.linspace(0.0, 1.0, _GRID + 1)


def _extrema(coef: np.ndarray) -> tuple[float, float]:
    """(min, max) of a polynomial on [0, 1]: grid plus real critical points."""
    cand = [_GRID_X]
    deriv = P.polyder(coef)
    if deriv.size > 1 and np.any(deriv[1:] != 0):
        r = P.polyroots(deriv)
        r = r.real[(np.abs(r.imag) < 1e-9) & (r.real >= 0) & (r.real <= 1)]
        cand.append(r)
    v = P.polyval(np.concatenate(cand), coef)
    return float(v.min()), float(v.max())


def ep4_objective(profile: KreinProfile) -> float:
    """rho(g) divided by the minimum of the periodization of g-hat."""
    if profile.is_zero():
        raise InfeasibleProfile("zero profile")
    ghat = autocorrelation_poly(profile)
    lo, _ = _extrema(periodization_poly(ghat))
    rv = _rho_from(profile.coeffs, ghat)
    if lo <= 1e-14 * max(1.0, abs(rv.ghat0)):
        raise InfeasibleProfile(f"periodization minimum {lo:.3g} is not positive")
    return rv.rho / lo


def ep5_objective(profile: KreinProfile) -> float:
    """(g(0) + c0 (rho - g(0))) divided by the maximum of the periodization."""
    if profile.is_zero():
        raise InfeasibleProfile("zero profile")
    ghat = autocorrelation_poly(profile)
    rv = _rho_from(profile.coeffs, ghat)
    if rv.g0 <= 1e-14 * max(1.0, abs(rv.ghat0)):
        raise InfeasibleProfile("g(0) vanishes")
    _, hi = _extrema(periodization_poly(ghat))
    return (rv.g0 + c0() * (rv.rho - rv.g0)) / hi


@dataclass
class SearchResult:
    problem: str
    degree: int
    seed: int
    restarts: int
    profile: KreinProfile
    value: float
    trace: list[float] = field(default_factory=list)
    restart_values: list[float] = field(default_factory=list)
    record: float = float("nan")
    record_met: bool = False

    @property
    def status(self) -> str:
        return "record met" if self.record_met else "record not met"


_PENALTY = 1e6


def _signed_objective(problem: str):
    obj = ep4_objective if problem == "ep4" else ep5_objective
    sign = 1.0 if problem == "ep4" else -1.0

    def f(x: np.ndarray) -> float:
        prof = KreinProfile((1.0, *x))
        try:
            v = sign * obj(prof)
        except InfeasibleProfile:
            return _PENALTY
        # keep the search finite even for near-degenerate profiles
        return v if math.isfinite(v) else _PENALTY
    return f


def _one_restart(problem: str, dim: int, seed_seq: np.random.SeedSequence, index: int,
                 max_iter: int, polish_rounds: int):
    f = _signed_objective(problem)
    rng = np.random.default_rng(seed_seq)
    start = np.zeros(dim) if index == 0 else rng.uniform(-50.0, 50.0, dim)
    scale = 1.0 if index == 0 else 10.0
    sub = int(rng.integers(0, 2 ** 31))
    trace: list[float] = []
    tol = Tolerance(1e-12, 1e-10, max_iter)
    res = minimize_simplex(f, start, scale=scale, tol=tol, seed=sub)
    trace.extend(res.trace)
    x, fx = res.x, res.fun
    for k in range(polish_rounds):
        scale = max(1e-3, 0.1 * float(np.max(np.abs(x))) if x.size else 1e-3) / (k + 1)
        res = minimize_simplex(f, x, scale=scale, tol=tol, seed=sub + k + 1)
        trace.extend(res.trace)
        if res.fun >= fx - 1e-15:
            break
        x, fx = res.x, res.fun
    return x, fx, trace


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("PAIRCORR_THREADS", "1")))
    except ValueError:
        return 1


def search(problem: str, degree: int = 8, restarts: int = 8, seed: int = 0,
           max_iter: int = 1500, polish_rounds: int = 3, workers: int | None = None) -> SearchResult:
    """Multi-start simplex search over even profiles with constant term 1.

    Restart 0 starts from p = 1; the others start from coefficients drawn
    uniformly in [-50, 50]. Each restart gets an independent child seed, so
    the outcome does not depend on ``workers``. The best restart wins, ties
    going to the lower index.
    """
    if problem not in ("ep4", "ep5"):
        raise ValueError(f"unknown problem {problem!r}")
    if degree % 2 or not 0 <= degree <= MAX_DEGREE:
        raise ValueError(f"degree must be even and at most {MAX_DEGREE}")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    record = EP4_RECORD if problem == "ep4" else EP5_RECORD
    sign = 1.0 if problem == "ep4" else -1.0
    dim = degree // 2
    if dim == 0:
        prof = KreinProfile((1.0,))
        v = ep4_objective(prof) if problem == "ep4" else ep5_objective(prof)
        met = v <= record if problem == "ep4" else v >= record
        return SearchResult(problem, degree, seed, restarts, prof, v, [v], [v], record, met)

    children = np.random.SeedSequence(seed).spawn(restarts)
    jobs = [(problem, dim, children[i], i, max_iter, polish_rounds) for i in range(restarts)]
    nw = workers or _workers()
    if nw > 1:
        with ThreadPoolExecutor(nw) as ex:
            outs = list(ex.map(lambda a: _one_restart(*a), jobs))
    else:
        outs = [_one_restart(*a) for a in jobs]
    best = min(range(restarts), key=lambda i: (outs[i][1], i))
    x, fx, _ = outs[best]
    trace = [sign * v for o in outs for v in o[2]]
    prof = KreinProfile((1.0, *x))
    value = sign * fx
    met = value <= record if problem == "ep4" else value >= record
    # restarts that never left the infeasible region report nan
    per_restart = [sign * o[1] if o[1] < _PENALTY else math.nan for o in outs]
    return SearchResult(problem, degree, seed, restarts, prof, value, trace,
                        per_restart, record, met)
