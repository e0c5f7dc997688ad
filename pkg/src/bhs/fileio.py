"""Text file formats for far-field data, indicator maps, heatmaps and locations.

All numeric output uses 17-significant-digit decimals, which round-trips
IEEE doubles exactly, keeps files diff-able, and stays language-portable.
Every format starts with a magic+version line; readers reject unknown
versions. Direction grids are implicit and 0-based: theta_i = 2 pi i / N.
"""

from __future__ import annotations

import warnings
from pathlib import Path

import numpy as np

from .exceptions import FormatError
from .forward import FarFieldMatrix
from .grids import IndicatorMap, SamplingGrid

__all__ = [
    "write_farfield",
    "read_farfield",
    "write_indicator",
    "read_indicator",
    "write_heatmap",
    "write_mask",
    "write_localization",
]

_FF_MAGIC = "#bhff v1"
_IND_MAGIC = "#bhind v1"
_LOC_MAGIC = "#bhloc v1"
_PGM_MAXVAL = 65535


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_farfield(path, F: FarFieldMatrix) -> None:
    """Write a far-field matrix: magic, kappa, N, then N rows of 2N decimals."""
    N = F.size
    lines = [_FF_MAGIC, f"kappa={_fmt(F.kappa)}", f"N={N}"]
    for i in range(N):
        row = F.entries[i]
        lines.append(" ".join(f"{_fmt(v.real)} {_fmt(v.imag)}" for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_farfield(path) -> FarFieldMatrix:
    """Read a far-field file; warns on an odd direction count (reciprocity
    diagnostics need an even grid) but accepts it."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].strip() != _FF_MAGIC:
        raise FormatError(f"{path}: expected magic line {_FF_MAGIC!r}")
    try:
        kappa = float(lines[1].split("=", 1)[1])
        N = int(lines[2].split("=", 1)[1])
    except (IndexError, ValueError) as exc:
        raise FormatError(f"{path}: malformed header") from exc
    data = lines[3:3 + N]
    if len(data) < N:
        raise FormatError(f"{path}: expected {N} data rows, found {len(data)}")
    entries = np.empty((N, N), dtype=np.complex128)
    for i, line in enumerate(data):
        parts = line.split()
        if len(parts) != 2 * N:
            raise FormatError(f"{path}: row {i} has {len(parts)} values, expected {2 * N}")
        vals = np.array([float(p) for p in parts])
        entries[i] = vals[0::2] + 1j * vals[1::2]
    if N % 2 != 0:
        warnings.warn(f"{path}: odd direction count {N}; reciprocity diagnostics need even N")
    return FarFieldMatrix(kappa=kappa, entries=entries)


def _meta_lines(meta: dict):
    for key in sorted(meta):
        yield f"meta.{key}={meta[key]}"


def write_indicator(path, indicator: IndicatorMap) -> None:
    """Write an indicator map: header with bounds/resolution and metadata,
    then ny rows of nx decimals with y increasing row by row."""
    g = indicator.grid
    lines = [
        _IND_MAGIC,
        f"xmin={_fmt(g.xmin)}",
        f"xmax={_fmt(g.xmax)}",
        f"ymin={_fmt(g.ymin)}",
        f"ymax={_fmt(g.ymax)}",
        f"nx={g.nx}",
        f"ny={g.ny}",
    ]
    lines.extend(_meta_lines(indicator.meta))
    arr = indicator.as_array()
    for iy in range(g.ny):
        lines.append(" ".join(_fmt(v) for v in arr[iy]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_indicator(path) -> IndicatorMap:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].strip() != _IND_MAGIC:
        raise FormatError(f"{path}: expected magic line {_IND_MAGIC!r}")
    try:
        header = dict(line.split("=", 1) for line in lines[1:7])
        grid = SamplingGrid(
            xmin=float(header["xmin"]), xmax=float(header["xmax"]),
            ymin=float(header["ymin"]), ymax=float(header["ymax"]),
            nx=int(header["nx"]), ny=int(header["ny"]),
        )
    except (KeyError, ValueError) as exc:
        raise FormatError(f"{path}: malformed header") from exc
    meta = {}
    pos = 7
    while pos < len(lines) and lines[pos].startswith("meta."):
        key, value = lines[pos][5:].split("=", 1)
        meta[key] = value
        pos += 1
    data = lines[pos:pos + grid.ny]
    if len(data) < grid.ny:
        raise FormatError(f"{path}: expected {grid.ny} data rows, found {len(data)}")
    rows = []
    for i, line in enumerate(data):
        vals = [float(p) for p in line.split()]
        if len(vals) != grid.nx:
            raise FormatError(f"{path}: row {i} has {len(vals)} values, expected {grid.nx}")
        rows.append(vals)
    return IndicatorMap(grid=grid, values=np.asarray(rows, dtype=float).ravel(), meta=meta)


def write_heatmap(path, indicator: IndicatorMap) -> None:
    """Render an indicator map as an ASCII PGM (P2) image.

    Values map linearly from [min, max] to [0, 65535] via
    pix = min(floor((v - min) / (max - min) * 65536), 65535); a constant
    map renders as all zeros. Image convention: the top pixel row is the
    y = ymax grid row.
    """
    g = indicator.grid
    arr = indicator.as_array()
    lo, hi = float(arr.min()), float(arr.max())
    if hi > lo:
        pix = np.minimum(
            np.floor((arr - lo) / (hi - lo) * (_PGM_MAXVAL + 1)).astype(int), _PGM_MAXVAL
        )
    else:
        pix = np.zeros_like(arr, dtype=int)
    lines = ["P2", f"{g.nx} {g.ny}", str(_PGM_MAXVAL)]
    for iy in range(g.ny - 1, -1, -1):  # top row = ymax
        lines.append(" ".join(str(v) for v in pix[iy]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_mask(path, indicator: IndicatorMap, mask: np.ndarray) -> None:
    """Write a boolean mask in the indicator format with 0/1 values."""
    as_map = IndicatorMap(
        grid=indicator.grid,
        values=mask.astype(float),
        meta={**indicator.meta, "content": "mask"},
    )
    write_indicator(path, as_map)


def write_localization(path, result) -> None:
    """Write a multilevel localization result with its level history."""
    lines = [
        _LOC_MAGIC,
        f"center_x={_fmt(result.center[0])}",
        f"center_y={_fmt(result.center[1])}",
        f"radius={_fmt(result.radius)}",
        f"low_confidence={int(result.low_confidence)}",
        f"levels={len(result.history)}",
    ]
    for level, radius, z in result.history:
        lines.append(f"level.{level}={_fmt(radius)} {_fmt(z[0])} {_fmt(z[1])}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
