"""Empirical form factor from tables of zero ordinates.

F(alpha, T) = 2 pi / (T log T) * sum_{gamma, gamma' <= T} T^{i alpha (gamma - gamma')} w(gamma - gamma')
with w(u) = 4 / (4 + u^2). The sum is real and even in alpha.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.integrate import trapezoid

from .fbounds import c_bounds_interval, density_integral

__all__ = [
    "DatasetError",
    "ZeroDataset",
    "FormFactorEstimate",
    "ReportRow",
    "ComparisonReport",
    "weight",
    "load_zeros",
    "form_factor",
    "brute_force_form_factor",
    "compare_report",
    "DEFAULT_CUTOFF",
]

DEFAULT_CUTOFF = 100.0
MIN_STEPS = 8


class DatasetError(ValueError):
    """Malformed or unusable zero table."""


def weight(u):
    return 4.0 / (4.0 + np.square(u))


@dataclass(frozen=True)
class ZeroDataset:
    ordinates: np.ndarray
    T: float
    source: str = ""

    def __post_init__(self):
        g = np.asarray(self.ordinates, dtype=float)
        if g.size == 0:
            raise DatasetError("dataset is empty")
        if not np.all(np.isfinite(g)) or g[0] <= 0:
            raise DatasetError("ordinates must be finite and positive")
        if np.any(np.diff(g) < 0):
            raise DatasetError("ordinates must be non-decreasing")
        if not self.T > 1:
            raise DatasetError("T must exceed 1")
        if g[-1] > self.T:
            raise DatasetError("ordinates exceed T")
        g.setflags(write=False)
        object.__setattr__(self, "ordinates", g)

    def __len__(self) -> int:
        return self.ordinates.size

    @property
    def scale(self) -> float:
        """2 pi / (T log T)."""
        return 2 * math.pi / (self.T * math.log(self.T))


def load_zeros(path, T: float | None = None) -> ZeroDataset:
    """Read one ordinate per line; '#' starts a comment, blank lines are skipped.

    T defaults to the largest ordinate; ordinates above T are dropped.
    """
    path = Path(path)
    vals: list[float] = []
    with path.open("r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, 1):
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                v = float(text)
            except ValueError:
                raise DatasetError(f"{path}:{lineno}: cannot parse {text!r}") from None
            if not math.isfinite(v) or v <= 0:
                raise DatasetError(f"{path}:{lineno}: ordinate must be positive, got {text!r}")
            if vals and v < vals[-1]:
                raise DatasetError(f"{path}:{lineno}: ordinates decrease ({vals[-1]} then {v})")
            vals.append(v)
    g = np.array(vals)
    if T is None:
        if g.size == 0:
            raise DatasetError(f"{path}: no ordinates")
        T = float(g[-1])
    g = g[g <= T]
    if g.size == 0:
        raise DatasetError(f"{path}: no ordinates at or below T={T}")
    return ZeroDataset(g, float(T), str(path))


@dataclass(frozen=True)
class FormFactorEstimate:
    alpha: float
    value: float
    cutoff: float
    truncation_bound: float


def _pair_terms(g: np.ndarray, freq: float, cutoff: float):
    """Off-diagonal terms cos(freq * gap) w(gap) for gaps <= cutoff, one per
    unordered pair, grouped by index offset. Returns (terms, kept_count)."""
    chunks = []
    kept = 0
    n = g.size
    for k in range(1, n):
        gaps = g[k:] - g[:-k]
        mask = gaps <= cutoff
        if not mask.any():
            # gaps grow with the offset since g is sorted
            break
        gaps = gaps[mask]
        kept += gaps.size
        chunks.append(np.cos(freq * gaps) * weight(gaps))
    return chunks, kept


def form_factor(ds: ZeroDataset, alpha: float, cutoff: float = DEFAULT_CUTOFF) -> FormFactorEstimate:
    """Windowed pair sum; pairs further apart than ``cutoff`` are dropped and
    their worst-case contribution is reported in ``truncation_bound``."""
    if not cutoff > 0:
        raise ValueError("cutoff must be positive")
    g = ds.ordinates
    n = g.size
    freq = float(alpha) * math.log(ds.T)
    chunks, kept = _pair_terms(g, freq, cutoff)
    off = math.fsum(math.fsum(c) for c in chunks)
    value = ds.scale * (n + 2.0 * off)
    dropped = n * (n - 1) // 2 - kept
    # w is decreasing in |u|, so each dropped ordered pair is at most w(cutoff)
    bound = ds.scale * 2.0 * dropped * float(weight(cutoff)) if dropped else 0.0
    return FormFactorEstimate(float(alpha), value, float(cutoff), bound)


def brute_force_form_factor(ds: ZeroDataset, alpha: float) -> float:
    """O(N^2) double sum over all ordered pairs."""
    g = ds.ordinates
    d = np.subtract.outer(g, g)
    terms = np.cos(alpha * math.log(ds.T) * d) * weight(d)
    return ds.scale * math.fsum(terms.ravel())


@dataclass(frozen=True)
class ReportRow:
    alpha: float
    value: float
    truncation_bound: float
    reference: float

    @property
    def deviation(self) -> float:
        return self.value - self.reference


def _reference(alpha: float, T: float) -> float:
    """T^{-2a} log T + a for a <= 1 and the conjectured 1 beyond."""
    a = abs(alpha)
    if a <= 1:
        return T ** (-2 * a) * math.log(T) + a
    return 1.0


@dataclass
class ComparisonReport:
    b: float
    beta: float
    T: float
    rows: list[ReportRow] = field(default_factory=list)
    integral: float = 0.0
    lower: float = 0.0
    upper: float = 0.0
    conjectured: float = 0.0
    density_reference: float = 0.0

    @property
    def outside_band(self) -> bool:
        return not self.lower <= self.integral <= self.upper

    @property
    def note(self) -> str:
        if self.outside_band:
            return "empirical integral outside the bound band; the bounds hold only as T -> infinity"
        return "empirical integral inside the bound band"


def compare_report(ds: ZeroDataset, b: float, beta: float, steps: int = 32,
                   cutoff: float = DEFAULT_CUTOFF) -> ComparisonReport:
    """Trapezoid integral of F over [b, beta] next to the asymptotic bounds."""
    if steps < MIN_STEPS:
        raise ValueError(f"steps must be >= {MIN_STEPS}")
    if not beta >= b >= 1:
        raise ValueError("need beta >= b >= 1")
    alphas = np.linspace(b, beta, steps + 1)
    rows = []
    for a in alphas:
        est = form_factor(ds, float(a), cutoff)
        rows.append(ReportRow(est.alpha, est.value, est.truncation_bound, _reference(est.alpha, ds.T)))
    rep = ComparisonReport(b, beta, ds.T, rows)
    if beta == b:
        return rep
    rep.integral = float(trapezoid([r.value for r in rows], alphas))
    rep.lower, rep.upper = c_bounds_interval(b, beta)
    rep.conjectured = beta - b
    rep.density_reference = density_integral(beta) - density_integral(b)
    return rep
