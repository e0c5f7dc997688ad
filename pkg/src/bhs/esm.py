"""Extended sampling method: cavity localization from one or few incident waves.

The modified far-field equation compares measured data against the analytic
far field of a sound-soft disk B_z of radius R centered at the sampling
point z,

    A^z g_z = u_inf(., d),      A^z[i, j] = e^{i kappa z.(yhat_j - xhat_i)}
                                            U(xhat_i, yhat_j),

where U is the separation-of-variables far field of the origin-centered
disk. The regularized solution norm ||g_z|| stays bounded where the cavity
is contained in B_z and blows up where B_z misses it; the normalized map
||g_z|| / max ||g_z|| is minimized at the estimated location.

Because the translation enters A^z only through unitary diagonal factors,

    A^z = Dx(z) U Dy(z),   (alpha I + (A^z)* A^z) = Dy* (alpha I + U* U) Dy,

the norm ||g_z|| equals || (alpha I + U* U)^{-1} U* (e^{i kappa z.xhat} o b) ||.
One Hermitian factorization of the z = 0 system therefore serves the whole
grid, with O(N) per-point state.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg as sla
from scipy import special as _sp

from .exceptions import DataError
from .grids import IndicatorMap, SamplingGrid

__all__ = [
    "DEFAULT_ALPHA",
    "DiskKernel",
    "EsmConfig",
    "LocalizationResult",
    "disk_far_field",
    "build_disk_kernel",
    "translated_kernel",
    "esm_indicator",
    "multilevel_esm",
]

DEFAULT_ALPHA = 1e-4

_TAIL_TOL = 1e-14
_EIGENVALUE_GUARD = 1e-8
_MAX_LEVELS = 8
_LEVEL_GRID_CAP = 256
_LEVEL_GRID_FRACTION = 32


def _mode_ratios(R: float, kappa: float, tail_tol: float = _TAIL_TOL) -> np.ndarray:
    """Series coefficients J_n(kR)/H_n^(1)(kR), truncated at the smallest
    n >= kR + 10 whose ratio magnitude falls below ``tail_tol``."""
    z = kappa * R
    n_max = max(int(np.ceil(z + 10.0)), 1)
    while abs(_sp.jv(n_max, z) / _sp.hankel1(n_max, z)) >= tail_tol:
        n_max += 1
    ns = np.arange(n_max + 1)
    return _sp.jv(ns, z) / _sp.hankel1(ns, z)


def disk_far_field(R: float, kappa: float, theta_x, theta_y) -> complex | np.ndarray:
    """Sound-soft disk far field U(theta_x, theta_y) for the origin-centered disk.

    Separation of variables gives

        -e^{-i pi/4} sqrt(2/(pi kappa)) [ J_0(kR)/H_0(kR)
            + 2 sum_{n>=1} J_n(kR)/H_n(kR) cos(n (theta_x - theta_y)) ].

    Depends on the angles only through their difference and is symmetric in
    them. H_n^(1) never vanishes for real positive argument, so every term
    is finite.
    """
    if R <= 0.0 or kappa <= 0.0:
        raise ValueError("R and kappa must be positive")
    ratios = _mode_ratios(R, kappa)
    delta = np.asarray(theta_x, dtype=float) - np.asarray(theta_y, dtype=float)
    scalar = delta.ndim == 0
    delta = np.atleast_1d(delta)
    ns = np.arange(1, len(ratios))
    series = ratios[0] + 2.0 * np.einsum("n,nk->k", ratios[1:], np.cos(np.outer(ns, delta)))
    out = -np.exp(-1j * np.pi / 4.0) * np.sqrt(2.0 / (np.pi * kappa)) * series
    return complex(out[0]) if scalar else out


@dataclass(frozen=True)
class DiskKernel:
    """Precomputed disk far-field matrix U[i, j] on the equiangular grid.

    Circulant (function of (i - j) mod N) and symmetric by construction.
    ``radius`` is the effective radius after the Dirichlet-eigenvalue guard,
    which may differ from the requested one by 1 percent.
    """

    radius: float
    kappa: float
    size: int
    matrix: np.ndarray  # (N, N) complex

    @property
    def directions(self) -> np.ndarray:
        th = 2.0 * np.pi * np.arange(self.size) / self.size
        return np.stack([np.cos(th), np.sin(th)], axis=-1)


def _guard_radius(R: float, kappa: float) -> float:
    """Perturb R by 1 percent if kappa^2 sits numerically on a Dirichlet
    eigenvalue of the sampling disk (a zero of some J_n(kappa R)).

    Only orders n <= kappa R can have a zero at kappa R (the first zero of
    J_n exceeds n), so the scan stops there; higher orders are in their
    decay regime where small values are natural, not eigenvalues.
    """
    z = kappa * R
    ns = np.arange(int(np.floor(z)) + 1)
    if np.min(np.abs(_sp.jv(ns, z))) > _EIGENVALUE_GUARD:
        return R
    warnings.warn(
        f"kappa^2 is numerically a Dirichlet eigenvalue of the sampling disk "
        f"(kappa R = {z:.9g}); perturbing R by 1%",
        stacklevel=3,
    )
    return 1.01 * R


def build_disk_kernel(R: float, kappa: float, N: int) -> DiskKernel:
    """Disk kernel over N directions, with the eigenvalue guard applied."""
    if N < 2:
        raise ValueError(f"direction count must be >= 2, got {N}")
    R = _guard_radius(R, kappa)
    dth = 2.0 * np.pi * np.arange(N) / N
    row = disk_far_field(R, kappa, dth, 0.0)      # U as a function of theta_x - theta_y
    idx = np.arange(N)
    U = row[(idx[:, None] - idx[None, :]) % N]
    return DiskKernel(radius=R, kappa=kappa, size=N, matrix=U)


def translated_kernel(z, kernel: DiskKernel) -> np.ndarray:
    """Kernel matrix A^z of the disk centered at z: e^{i kappa z.(yhat_j - xhat_i)} U[i, j]."""
    z = np.asarray(z, dtype=float).reshape(2)
    phase = np.exp(1j * kernel.kappa * (kernel.directions @ z))  # (N,)
    return phase.conj()[:, None] * kernel.matrix * phase[None, :]


@dataclass(frozen=True)
class EsmConfig:
    """Parameters of one extended-sampling run.

    ``directions`` are incident angles in radians and ``wavenumbers`` the
    kappa values; the data passed to :func:`esm_indicator` must provide one
    far-field column per (wavenumber, direction) pair.
    """

    grid: SamplingGrid
    radius: float
    wavenumbers: Sequence[float]
    directions: Sequence[float]
    alpha: float = DEFAULT_ALPHA

    def __post_init__(self):
        if self.alpha <= 0.0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if self.radius <= 0.0:
            raise ValueError(f"radius must be > 0, got {self.radius}")
        if len(self.wavenumbers) == 0 or len(self.directions) == 0:
            raise ValueError("wavenumbers and directions must be nonempty")


def _column_norms(column: np.ndarray, kernel: DiskKernel, alpha: float,
                  points: np.ndarray) -> np.ndarray:
    """||g_z|| for one data column over all sampling points (shared factorization)."""
    N = kernel.size
    M = alpha * np.eye(N, dtype=np.complex128) + kernel.matrix.conj().T @ kernel.matrix
    cho = sla.cho_factor(M, check_finite=False)
    W = sla.cho_solve(cho, kernel.matrix.conj().T, check_finite=False)   # (N, N)
    PX = np.exp(1j * kernel.kappa * (points @ kernel.directions.T))      # (K, N)
    G = (PX * column[None, :]) @ W.T                                     # (K, N)
    return np.sqrt(np.sum(np.abs(G) ** 2, axis=1))


def esm_indicator(columns, config: EsmConfig, meta: dict | None = None) -> IndicatorMap:
    """Normalized localization indicator from one or many far-field columns.

    Parameters
    ----------
    columns : array-like, shape (L, J, N)
        Far-field data u_inf(xhat_i, d_j; kappa_l) on the equiangular
        observation grid, one column per wavenumber/direction pair.
    config : EsmConfig

    The raw value at z is the sum over all pairs of the regularized
    solution norms; the map is scaled so its maximum is exactly 1 and the
    location estimate is the grid argmin.
    """
    columns = np.asarray(columns, dtype=np.complex128)
    if columns.ndim == 1:
        columns = columns[None, None, :]
    if columns.ndim != 3:
        raise ValueError(f"columns must have shape (L, J, N), got {columns.shape}")
    L, J, N = columns.shape
    if L != len(config.wavenumbers) or J != len(config.directions):
        raise ValueError(
            f"columns shape {columns.shape} does not match "
            f"{len(config.wavenumbers)} wavenumbers x {len(config.directions)} directions"
        )
    if np.any(np.max(np.abs(columns), axis=2) == 0.0):
        raise DataError("far-field column is identically zero")

    points = config.grid.points()
    raw = np.zeros(config.grid.size)
    for ell, kappa in enumerate(config.wavenumbers):
        kernel = build_disk_kernel(config.radius, kappa, N)
        for j in range(J):
            raw += _column_norms(columns[ell, j], kernel, config.alpha, points)
    values = raw / np.max(raw)
    info = {
        "method": "esm",
        "kappa": list(map(float, config.wavenumbers)),
        "alpha": config.alpha,
        "radius": config.radius,
    }
    if meta:
        info.update(meta)
    return IndicatorMap(grid=config.grid, values=values, meta=info)


@dataclass(frozen=True)
class LocalizationResult:
    """Outcome of the multilevel radius search.

    ``history`` records (level, radius, minimizer) per completed level;
    radii halve each level. ``low_confidence`` marks runs whose first
    refinement already escaped the level-0 disk.
    """

    center: np.ndarray
    radius: float
    history: tuple
    low_confidence: bool = False


def _level_grid(region, radius: float) -> SamplingGrid:
    """Uniform lattice over the region with spacing about min(radius, extent/32)."""
    xmin, xmax, ymin, ymax = region
    extent = max(xmax - xmin, ymax - ymin)
    spacing = min(radius, extent / _LEVEL_GRID_FRACTION)
    nx = min(int(round((xmax - xmin) / spacing)) + 1, _LEVEL_GRID_CAP)
    ny = min(int(round((ymax - ymin) / spacing)) + 1, _LEVEL_GRID_CAP)
    return SamplingGrid(xmin, xmax, ymin, ymax, max(nx, 2), max(ny, 2))


def multilevel_esm(column, kappa: float, R0: float, region,
                   alpha: float = DEFAULT_ALPHA) -> LocalizationResult:
    """Halving-radius localization driver.

    Level j scans radius R_j = R0 / 2^j on a grid with spacing about R_j
    (clamped as in :func:`_level_grid`), tracking the indicator minimizer
    z_j. Iteration stops when z_j leaves the previous disk B(z_{j-1},
    R_{j-1}) or when the level cap (8) is reached; the previous level's
    minimizer and radius are returned. If the very first refinement
    escapes, the level-0 result is returned flagged low-confidence.
    """
    if R0 <= 0.0:
        raise ValueError(f"R0 must be > 0, got {R0}")
    column = np.asarray(column, dtype=np.complex128).reshape(-1)

    def scan(radius: float):
        grid = _level_grid(region, radius)
        cfg = EsmConfig(grid=grid, radius=radius, wavenumbers=[kappa], directions=[0.0], alpha=alpha)
        return esm_indicator(column[None, None, :], cfg).argmin_point()

    history = [(0, R0, scan(R0))]
    for j in range(1, _MAX_LEVELS):
        Rj = R0 / 2**j
        zj = scan(Rj)
        _, R_prev, z_prev = history[-1]
        if np.hypot(*(zj - z_prev)) > R_prev:
            return LocalizationResult(
                center=z_prev, radius=R_prev, history=tuple(history), low_confidence=(j == 1)
            )
        history.append((j, Rj, zj))
    _, R_last, z_last = history[-1]
    return LocalizationResult(center=z_last, radius=R_last, history=tuple(history))
