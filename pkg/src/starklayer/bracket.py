"""Analytic two-sided localization of the windowed operator's discrete spectrum.

The inner cylinder of radius ``a`` with a Dirichlet side wall separates into
Bessel radial modes and mixed transverse levels, giving the explicit
eigenvalues ``(x_{m,k}/a)^2 + lambda_inf_n``.  By min-max these are upper
bounds for the windowed layer, so every such value below the essential-
spectrum edge certifies one eigenvalue (two for angular order m >= 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .transverse import (
    BoundaryType,
    WaveguideParams,
    _ground_state_cached,
    _nd_ground_cached,
    levels,
)

__all__ = [
    "SpectralWindow",
    "BracketEstimate",
    "FigureCurves",
    "window",
    "dirichlet_disc_levels",
    "count_certified",
    "sufficient_radius",
    "sorted_bessel_zeros",
    "figure_curves",
]


@dataclass(frozen=True)
class SpectralWindow:
    """Interval [lower, upper) = [first mixed level, essential-spectrum edge)."""

    lower: float
    upper: float

    @property
    def gap(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class BracketEstimate:
    """Inner-cylinder Dirichlet eigenvalue ``(x_{m,k}/a)^2 + lambda_inf_n``.

    Angular orders m >= 1 carry multiplicity 2 (the two rotation senses).
    """

    n: int
    m: int
    k: int
    lam: float
    multiplicity: int


def window(params: WaveguideParams) -> SpectralWindow:
    """Spectral window: the discrete spectrum is confined to [lower, upper)."""
    lower = _nd_ground_cached(params).lam
    upper = _ground_state_cached(params).lam
    return SpectralWindow(lower=lower, upper=upper)


def dirichlet_disc_levels(params: WaveguideParams, below: float,
                          n_max: int, m_max: int, k_max: int) -> list[BracketEstimate]:
    """All inner-cylinder levels strictly below ``below`` within the index caps, ascending.

    Each is an upper bound for an eigenvalue of the windowed layer.  A zero
    window radius has no inner cylinder: returns an empty list.
    """
    if params.a <= 0.0:
        return []
    if n_max < 1 or m_max < 0 or k_max < 1:
        raise ValueError("index caps must be positive (m_max >= 0)")
    nd = levels(params, BoundaryType.NEUMANN_DIRICHLET, n_max)
    a = params.a
    out = []
    for lvl in nd:
        room = below - lvl.lam
        if room <= 0.0:
            break
        xmax = a * math.sqrt(room)
        for m in range(0, m_max + 1):
            if specfun.bessel_zero(m, 1) >= xmax:
                break
            for k in range(1, k_max + 1):
                x = specfun.bessel_zero(m, k)
                if x >= xmax:
                    break
                out.append(BracketEstimate(
                    n=lvl.n, m=m, k=k,
                    lam=(x / a) ** 2 + lvl.lam,
                    multiplicity=1 if m == 0 else 2,
                ))
    out.sort(key=lambda e: (e.lam, e.m, e.k, e.n))
    return out


def count_certified(params: WaveguideParams) -> int:
    """Certified lower bound (with multiplicity) on the number of eigenvalues
    below the essential spectrum."""
    if params.a <= 0.0:
        return 0
    win = window(params)
    below = win.upper
    a = params.a

    total = 0
    n_have = 0
    batch = 4
    while True:
        nd = levels(params, BoundaryType.NEUMANN_DIRICHLET, n_have + batch)[n_have:]
        for lvl in nd:
            room = below - lvl.lam
            if room <= 0.0:
                return total
            xmax = a * math.sqrt(room)
            m = 0
            while True:
                if m > specfun.MAX_BESSEL_ORDER:
                    raise specfun.UnsupportedOrderError(
                        f"window radius a={a} requires angular orders beyond "
                        f"{specfun.MAX_BESSEL_ORDER}")
                if specfun.bessel_zero(m, 1) >= xmax:
                    break
                k = 1
                while specfun.bessel_zero(m, k) < xmax:
                    total += 1 if m == 0 else 2
                    k += 1
                m += 1
        n_have += batch


def sorted_bessel_zeros(count: int) -> list[float]:
    """First ``count`` positive zeros of all ``J_m`` merged and sorted ascending.

    Ties (none exist analytically) would resolve to the smaller order.
    """
    count = int(count)
    if count < 1:
        raise ValueError("count must be >= 1")
    ceiling = specfun.bessel_zero(0, count)  # x(i) <= x_{0,i}
    zeros = []
    m = 0
    while True:
        if m > specfun.MAX_BESSEL_ORDER:
            raise specfun.UnsupportedOrderError(
                f"sorted zero list of length {count} requires orders beyond "
                f"{specfun.MAX_BESSEL_ORDER}")
        if specfun.bessel_zero(m, 1) > ceiling:
            break
        k = 1
        while specfun.bessel_zero(m, k) <= ceiling:
            zeros.append((specfun.bessel_zero(m, k), m, k))
            k += 1
        m += 1
    zeros.sort(key=lambda t: (t[0], t[1]))
    return [z[0] for z in zeros[:count]]


def sufficient_radius(params: WaveguideParams, i: int) -> float:
    """Threshold radius ``a*_i = x(i) / sqrt(edge - lower)``.

    For ``a > a*_i`` at least ``i`` inner-cylinder curves dip below the
    essential-spectrum edge.
    """
    i = int(i)
    if i < 1:
        raise ValueError("curve index must be >= 1")
    win = window(params)
    x_i = sorted_bessel_zeros(i)[i - 1]
    return x_i / math.sqrt(win.gap)


@dataclass(frozen=True)
class FigureCurves:
    """Sweep of the first ``i_max`` inner-cylinder curves against the window edge."""

    a: np.ndarray
    curves: np.ndarray           # shape (steps, i_max)
    edge: float
    lower: float

    @property
    def header(self) -> list[str]:
        return ["a"] + [f"curve{i+1}" for i in range(self.curves.shape[1])] + ["edge"]

    def rows(self):
        for j in range(self.a.shape[0]):
            yield (float(self.a[j]), *(float(v) for v in self.curves[j]), self.edge)


def figure_curves(params: WaveguideParams, a_min: float, a_max: float,
                  steps: int, i_max: int = 3) -> FigureCurves:
    """Rows ``(a, (x(i)/a)^2 + lower ... , edge)`` over a uniform radius sweep."""
    if not (0.0 < a_min < a_max):
        raise ValueError("need 0 < a_min < a_max")
    steps = int(steps)
    if steps < 2:
        raise ValueError("steps must be >= 2")
    win = window(params)
    xs = np.array(sorted_bessel_zeros(int(i_max)))
    a = np.linspace(a_min, a_max, steps)
    curves = (xs[None, :] / a[:, None]) ** 2 + win.lower
    return FigureCurves(a=a, curves=curves, edge=win.upper, lower=win.lower)
