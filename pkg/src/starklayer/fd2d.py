"""Axisymmetric finite-difference eigensolver on the (r, z) cylinder.

Discretizes ``-(1/r) d/dr (r d/dr) + m^2/r^2 - d^2/dz^2 + F z`` with
conservative flux differencing: cell-centered radial nodes ``r_i = (i+1/2)h_r``
(no axis condition needed), vertex z nodes ``z_j = j h_z``.  The operator is
assembled from the quadratic form, so the matrix is exactly symmetric after
the diagonal similarity by the square root of the node weights
``w = r_i h_r h_z`` (half weight on the Neumann bottom row).

Three boundary setups: the inner cylinder of radius a with Dirichlet or
Neumann side wall (validating the analytic brackets from both sides), and the
truncated full window problem (Neumann on the bottom only inside the window;
its eigenvalues are upper bounds of the untruncated layer, decreasing in the
truncation radius).

Eigenpairs come from shift-invert power iteration with deflation at the fixed
shift ``0.9 * lambda_inf_1``; the inner solves use a sparse LU factorization,
so runs are deterministic.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .bracket import SpectralWindow, window
from .transverse import WaveguideParams, _nd_ground_cached

__all__ = [
    "CylGrid",
    "BCKind",
    "WindowBC",
    "CylOperator",
    "EigResult",
    "WindowResult",
    "ConvergenceError",
    "assemble",
    "lowest_eigs",
    "window_ground_state",
]

EIG_RESIDUAL_TOL = 1e-8
_POWER_SEED = 20240117


class ConvergenceError(RuntimeError):
    """Eigeniteration hit the iteration cap; carries the best iterate."""

    def __init__(self, message, best_value=None, best_residual=None):
        super().__init__(message)
        self.best_value = best_value
        self.best_residual = best_residual


@dataclass(frozen=True)
class CylGrid:
    """Tensor grid: nr radial cells on (0, r_max], nz vertical cells on [0, d]."""

    nr: int
    nz: int
    r_max: float
    d: float

    def __post_init__(self):
        if self.nr < 8 or self.nz < 8:
            raise ValueError("grid needs nr >= 8 and nz >= 8")
        if not (self.r_max > 0.0 and self.d > 0.0):
            raise ValueError("grid extents must be positive")

    @property
    def h_r(self) -> float:
        return self.r_max / self.nr

    @property
    def h_z(self) -> float:
        return self.d / self.nz

    @property
    def r_nodes(self) -> np.ndarray:
        return (np.arange(self.nr) + 0.5) * self.h_r

    @property
    def z_nodes(self) -> np.ndarray:
        return np.arange(self.nz + 1) * self.h_z


class BCKind(enum.Enum):
    INNER_DIRICHLET = "inner-dirichlet"
    INNER_NEUMANN = "inner-neumann"
    TRUNCATED_FULL = "truncated-full"


@dataclass(frozen=True)
class WindowBC:
    """Boundary setup plus angular order m of the Fourier sector."""

    kind: BCKind
    m: int = 0

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("angular order m must be >= 0")


@dataclass
class CylOperator:
    """Assembled symmetric operator with its grid bookkeeping."""

    matrix: sp.csr_matrix
    grid: CylGrid
    bc: WindowBC
    params: WaveguideParams
    active_index: np.ndarray   # (nr, nz+1) -> flat index or -1

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def assemble(params: WaveguideParams, grid: CylGrid, bc: WindowBC) -> CylOperator:
    """Assemble the similarity-scaled symmetric matrix for the requested setup."""
    if bc.kind is BCKind.TRUNCATED_FULL:
        if params.a <= 0.0:
            raise ValueError("truncated window problem requires a > 0")
        if grid.r_max < 4.0 * params.a:
            raise ValueError("truncated window problem requires r_max >= 4a")
    else:
        if not math.isclose(grid.r_max, params.a, rel_tol=1e-12):
            raise ValueError("inner-cylinder problems require r_max == a")

    nr, nz = grid.nr, grid.nz
    h_r, h_z = grid.h_r, grid.h_z
    r = grid.r_nodes
    z = grid.z_nodes

    active = np.ones((nr, nz + 1), dtype=bool)
    active[:, nz] = False                       # top plate: Dirichlet
    if bc.kind is BCKind.TRUNCATED_FULL:
        active[r > params.a, 0] = False         # bottom outside the window: Dirichlet

    index = np.full((nr, nz + 1), -1, dtype=np.int64)
    index[active] = np.arange(int(active.sum()))
    n = int(active.sum())

    wz = np.ones(nz + 1)
    wz[0] = 0.5                                  # trapezoid mass on the Neumann row
    weight = r[:, None] * h_r * h_z * wz[None, :]
    sqrt_w = np.sqrt(weight)

    rows, cols, vals = [], [], []

    def add_face(ip, jp, iq, jq, c):
        """Energy term c*(u_p - u_q)^2; eliminated endpoints read as zero."""
        p_act = active[ip, jp]
        q_act = active[iq, jq]
        both = p_act & q_act
        p = index[ip, jp]
        q = index[iq, jq]
        wp = sqrt_w[ip, jp]
        wq = sqrt_w[iq, jq]
        if np.any(p_act):
            rows.append(p[p_act]); cols.append(p[p_act]); vals.append((c / wp ** 2)[p_act])
        if np.any(q_act):
            rows.append(q[q_act]); cols.append(q[q_act]); vals.append((c / wq ** 2)[q_act])
        if np.any(both):
            off = (-c / (wp * wq))[both]
            rows.append(p[both]); cols.append(q[both]); vals.append(off)
            rows.append(q[both]); cols.append(p[both]); vals.append(off)

    # radial faces between cells i and i+1 (face radius (i+1)h_r)
    ii, jj = np.meshgrid(np.arange(nr - 1), np.arange(nz + 1), indexing="ij")
    c_r = (ii + 1.0) * h_z * wz[jj]
    add_face(ii, jj, ii + 1, jj, c_r)

    # vertical faces between j and j+1
    ii, jj = np.meshgrid(np.arange(nr), np.arange(nz), indexing="ij")
    c_z = r[ii] * h_r / h_z
    add_face(ii, jj, ii, jj + 1, c_z)

    # Dirichlet side wall at r_max: value 0 at the wall face, half-cell gradient
    if bc.kind in (BCKind.INNER_DIRICHLET, BCKind.TRUNCATED_FULL):
        jj = np.arange(nz + 1)
        ii = np.full_like(jj, nr - 1)
        sel = active[ii, jj]
        c_wall = 2.0 * grid.r_max * h_z * wz[jj] / h_r
        p = index[ii, jj][sel]
        rows.append(p); cols.append(p)
        vals.append((c_wall / sqrt_w[ii, jj] ** 2)[sel])

    # potential + angular barrier (diagonal in the similarity scaling)
    ii, jj = np.meshgrid(np.arange(nr), np.arange(nz + 1), indexing="ij")
    sel = active[ii, jj]
    pot = params.F * z[jj] + (bc.m ** 2) / r[ii] ** 2
    p = index[ii, jj][sel]
    rows.append(p); cols.append(p); vals.append(pot[sel])

    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    vals = np.concatenate(vals)
    matrix = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    return CylOperator(matrix=matrix, grid=grid, bc=bc, params=params, active_index=index)


@dataclass(frozen=True)
class EigResult:
    """Lowest eigenvalues with their relative residuals in the weighted norm."""

    values: list[float]
    residuals: list[float]
    grid: CylGrid
    bc: WindowBC


def lowest_eigs(op: CylOperator, k: int, tol: float = 1e-10,
                max_iter: int = 20000) -> EigResult:
    """k smallest eigenpairs by deflated shift-invert power iteration.

    Fixed shift ``0.9 * lambda_inf_1``; stops when the eigenvalue change is
    below ``tol`` and the residual is below ``1e-8``, else raises
    :class:`ConvergenceError` with the best iterate.
    """
    k = int(k)
    if not 1 <= k <= 10:
        raise ValueError("k must be in 1..10")
    m = op.matrix
    n = m.shape[0]
    shift = 0.9 * _nd_ground_cached(op.params).lam
    lu = splu(sp.csc_matrix(m - shift * sp.identity(n, format="csc")))

    rng = np.random.default_rng(_POWER_SEED)
    basis: list[np.ndarray] = []
    values: list[float] = []
    residuals: list[float] = []

    for _ in range(k):
        v = rng.standard_normal(n)
        for b in basis:
            v -= (b @ v) * b
        v /= np.linalg.norm(v)
        lam_prev = math.inf
        lam = math.inf
        res = math.inf
        for it in range(max_iter):
            u = lu.solve(v)
            for b in basis:
                u -= (b @ u) * b
            for b in basis:
                u -= (b @ u) * b
            u /= np.linalg.norm(u)
            mu = m @ u
            lam = float(u @ mu)
            res = float(np.linalg.norm(mu - lam * u))
            v = u
            if abs(lam - lam_prev) <= tol * max(1.0, abs(lam)) and res <= EIG_RESIDUAL_TOL:
                break
            lam_prev = lam
        else:
            raise ConvergenceError(
                f"eigenpair did not converge in {max_iter} iterations "
                f"(best value {lam}, residual {res})",
                best_value=lam, best_residual=res)
        basis.append(v)
        values.append(lam)
        residuals.append(res)

    order = np.argsort(values)
    return EigResult(values=[values[i] for i in order],
                     residuals=[residuals[i] for i in order],
                     grid=op.grid, bc=op.bc)


@dataclass(frozen=True)
class WindowResult:
    """Truncated window spectrum with the spectral window and bound-state flags."""

    eig: EigResult
    window: SpectralWindow
    below_edge: list[bool]
    error_estimates: list[float]


def window_ground_state(params: WaveguideParams, r_max: float | None = None,
                        nr: int = 128, nz: int = 128, k: int = 1) -> WindowResult:
    """Lowest truncated-window eigenvalues with Richardson error estimates.

    Dirichlet truncation at ``r_max`` (default ``8a``) bounds the true
    eigenvalues from above, tightening monotonically as ``r_max`` grows.
    The error estimate is ``|lambda_h - lambda_2h| / 3`` from a half-resolution
    companion run (O(h^2) scheme).
    """
    if params.a <= 0.0:
        raise ValueError("window problem requires a > 0")
    if r_max is None:
        r_max = 8.0 * params.a
    bc = WindowBC(BCKind.TRUNCATED_FULL)
    fine = lowest_eigs(assemble(params, CylGrid(nr, nz, r_max, params.d), bc), k)
    coarse = lowest_eigs(assemble(params, CylGrid(nr // 2, nz // 2, r_max, params.d), bc), k)
    win = window(params)
    estimates = [abs(f - c) / 3.0 for f, c in zip(fine.values, coarse.values)]
    flags = [v < win.upper for v in fine.values]
    return WindowResult(eig=fine, window=win, below_edge=flags, error_estimates=estimates)
