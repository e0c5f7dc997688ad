"""Spatial sampling grids and indicator maps shared by both imaging methods."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["SamplingGrid", "IndicatorMap"]


@dataclass(frozen=True)
class SamplingGrid:
    """Uniform rectangular lattice of sampling points, endpoints included.

    Points are ordered row-major with y varying slowest and increasing:
    index k = iy * nx + ix maps to (xs[ix], ys[iy]).
    """

    xmin: float
    xmax: float
    ymin: float
    ymax: float
    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid resolution must be at least 2 x 2")
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError("grid bounds must be ordered")

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.xmin, self.xmax, self.nx)

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(self.ymin, self.ymax, self.ny)

    @property
    def size(self) -> int:
        return self.nx * self.ny

    @property
    def spacing(self) -> float:
        """Largest step between adjacent sampling points."""
        return max((self.xmax - self.xmin) / (self.nx - 1), (self.ymax - self.ymin) / (self.ny - 1))

    def points(self) -> np.ndarray:
        """All sampling points as an (nx * ny, 2) array in row-major order."""
        X, Y = np.meshgrid(self.xs, self.ys)  # ys indexed by rows
        return np.stack([X.ravel(), Y.ravel()], axis=-1)


@dataclass(frozen=True)
class IndicatorMap:
    """Real nonnegative indicator value per sampling point, plus run metadata.

    ``meta`` records the method tag and the effective parameters (kappa or
    kappa list, alpha, noise level, seed) so a map file is self-describing.
    """

    grid: SamplingGrid
    values: np.ndarray  # (nx * ny,)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.size,):
            raise ValueError(f"values shape {v.shape} does not match grid size {self.grid.size}")
        if not np.all(np.isfinite(v)) or np.any(v < 0.0):
            raise ValueError("indicator values must be finite and nonnegative")
        object.__setattr__(self, "values", v)

    def as_array(self) -> np.ndarray:
        """Values reshaped to (ny, nx), row iy at y = ys[iy]."""
        return self.values.reshape(self.grid.ny, self.grid.nx)

    def argmin_point(self) -> np.ndarray:
        """Sampling point with the smallest value (lowest row-major index on ties)."""
        return self.grid.points()[int(np.argmin(self.values))]

    def normalized(self) -> np.ndarray:
        """Values scaled to maximum 1 (used for cutoff classification)."""
        peak = float(np.max(self.values))
        if peak == 0.0:
            return np.zeros_like(self.values)
        return self.values / peak
