"""Scenario files and deterministic end-to-end drivers.

A scenario is a UTF-8 text file of ``key=value`` lines ('#' starts a
comment, blank lines are skipped, a duplicated key keeps the last value
with a warning). Unknown keys, malformed numbers and out-of-range values
raise :class:`ConfigError` naming the key and line.

Recognized keys (defaults in parentheses):

    mode            forward | lsm | esm | esm-multilevel      (required)
    shape           apple | peanut | peach | circle | ellipse
    center          two comma-separated floats (0,0)
    scale           similarity factor (1)
    kappa           wavenumber; required unless multi-frequency or reading data
    kappa_min, kappa_max, L   uniform multi-frequency grid (esm only; L=1)
    N               direction count (32)
    n               boundary quadrature parameter, power of two (128)
    delta           relative noise level (0)
    seed            noise seed (0)
    alpha           Tikhonov parameter (1e-6 for lsm, 1e-4 for esm modes)
    grid_xmin, grid_xmax, grid_ymin, grid_ymax, grid_nx, grid_ny
                    sampling region and resolution
                    (lsm: [-1.5, 1.5]^2 at 128 x 128; esm: [-3, 3]^2 at 200 x 200)
    zeta            mask cutoff on the normalized indicator (0.2)
    R               sampling-disk radius, required for mode=esm
    R0              initial radius, required for mode=esm-multilevel
    directions      comma-separated incident angles in radians (pi/3)
    out             output path prefix (run)
    farfield_in     read far-field data from this file instead of synthesizing

All randomness flows from ``seed``; re-running an identical scenario
produces byte-identical outputs. Each run writes a ``<out>.manifest`` that
is itself a valid scenario reproducing the run, with diagnostics appended
as comments.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import esm as esm_mod
from . import fileio, lsm
from .exceptions import ConfigError
from .forward import add_noise, far_field_columns, far_field_matrix, reciprocity_residual
from .geometry import CURVE_NAMES, make_named_curve
from .grids import SamplingGrid

__all__ = ["Scenario", "parse_scenario", "load_scenario", "run"]

MODES = ("forward", "lsm", "esm", "esm-multilevel")

_GRID_DEFAULTS = {
    "lsm": (-1.5, 1.5, -1.5, 1.5, 128, 128),
    "esm": (-3.0, 3.0, -3.0, 3.0, 200, 200),
}
_ALPHA_DEFAULTS = {"lsm": lsm.DEFAULT_ALPHA, "esm": esm_mod.DEFAULT_ALPHA}


@dataclass(frozen=True)
class Scenario:
    mode: str
    shape: str | None = None
    center: tuple = (0.0, 0.0)
    scale: float = 1.0
    kappa: float | None = None
    kappa_min: float | None = None
    kappa_max: float | None = None
    L: int = 1
    N: int = 32
    n: int = 128
    delta: float = 0.0
    seed: int = 0
    alpha: float | None = None
    grid_xmin: float | None = None
    grid_xmax: float | None = None
    grid_ymin: float | None = None
    grid_ymax: float | None = None
    grid_nx: int | None = None
    grid_ny: int | None = None
    zeta: float = 0.2
    R: float | None = None
    R0: float | None = None
    directions: tuple = (np.pi / 3,)
    out: str = "run"
    farfield_in: str | None = None

    def effective_alpha(self) -> float:
        if self.alpha is not None:
            return self.alpha
        return _ALPHA_DEFAULTS["lsm" if self.mode == "lsm" else "esm"]

    def grid(self) -> SamplingGrid:
        dx0, dx1, dy0, dy1, dnx, dny = _GRID_DEFAULTS["lsm" if self.mode == "lsm" else "esm"]
        return SamplingGrid(
            xmin=self.grid_xmin if self.grid_xmin is not None else dx0,
            xmax=self.grid_xmax if self.grid_xmax is not None else dx1,
            ymin=self.grid_ymin if self.grid_ymin is not None else dy0,
            ymax=self.grid_ymax if self.grid_ymax is not None else dy1,
            nx=self.grid_nx if self.grid_nx is not None else dnx,
            ny=self.grid_ny if self.grid_ny is not None else dny,
        )

    def wavenumbers(self) -> list:
        if self.L > 1:
            lo, hi = self.kappa_min, self.kappa_max
            return [lo + (ell - 1) * (hi - lo) / (self.L - 1) for ell in range(1, self.L + 1)]
        return [self.kappa]


_PARSERS = {
    "mode": str, "shape": str, "out": str, "farfield_in": str,
    "scale": float, "kappa": float, "kappa_min": float, "kappa_max": float,
    "delta": float, "alpha": float, "zeta": float, "R": float, "R0": float,
    "grid_xmin": float, "grid_xmax": float, "grid_ymin": float, "grid_ymax": float,
    "L": int, "N": int, "n": int, "seed": int, "grid_nx": int, "grid_ny": int,
    "center": "pair", "directions": "floats",
}


def _fail(key: str, line_no: int, why: str):
    raise ConfigError(f"key '{key}' (line {line_no}): {why}")


def parse_scenario(text: str) -> Scenario:
    """Parse scenario text into a validated Scenario."""
    raw: dict = {}
    lines_of: dict = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {line_no}: expected key=value, got {stripped!r}")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key not in _PARSERS:
            raise ConfigError(f"unknown key '{key}' (line {line_no})")
        if key in raw:
            warnings.warn(f"duplicate key '{key}' on line {line_no}; last value wins")
        kind = _PARSERS[key]
        try:
            if kind == "pair":
                parts = [float(p) for p in value.split(",")]
                if len(parts) != 2:
                    raise ValueError("expected two comma-separated numbers")
                raw[key] = tuple(parts)
            elif kind == "floats":
                raw[key] = tuple(float(p) for p in value.split(","))
            else:
                raw[key] = kind(value)
        except ValueError as exc:
            _fail(key, line_no, f"malformed value {value!r} ({exc})")
        lines_of[key] = line_no

    scenario = Scenario(**{"mode": raw.pop("mode", None), **raw})
    _validate(scenario, lines_of)
    return scenario


def load_scenario(path) -> Scenario:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


def _validate(s: Scenario, lines_of: dict) -> None:
    def where(key: str) -> int:
        return lines_of.get(key, 0)

    if s.mode not in MODES:
        _fail("mode", where("mode"), f"must be one of {MODES}, got {s.mode!r}")
    if s.shape is not None and s.shape not in CURVE_NAMES:
        _fail("shape", where("shape"), f"must be one of {CURVE_NAMES}")
    if s.scale <= 0:
        _fail("scale", where("scale"), "must be > 0")
    for key in ("kappa", "kappa_min", "kappa_max", "alpha", "zeta", "R", "R0"):
        value = getattr(s, key)
        if value is not None and value <= 0:
            _fail(key, where(key), "must be > 0")
    if s.delta < 0:
        _fail("delta", where("delta"), "must be >= 0")
    if s.L < 1:
        _fail("L", where("L"), "must be >= 1")
    if s.N < 8 or s.N % 2 != 0:
        _fail("N", where("N"), "must be even and >= 8")
    if s.n < 8 or s.n > 1024 or (s.n & (s.n - 1)) != 0:
        _fail("n", where("n"), "must be a power of two in [8, 1024]")
    for key in ("grid_nx", "grid_ny"):
        value = getattr(s, key)
        if value is not None and value < 2:
            _fail(key, where(key), "must be >= 2")
    if not s.directions:
        _fail("directions", where("directions"), "must be nonempty")

    needs_shape = s.farfield_in is None
    if needs_shape and s.shape is None:
        _fail("shape", 0, f"required for mode={s.mode} without farfield_in")
    if s.farfield_in is not None and s.delta > 0:
        _fail("delta", where("delta"),
              "noise applies when synthesizing data; drop farfield_in or set delta=0")
    if s.mode == "esm":
        if s.R is None:
            _fail("R", 0, "required for mode=esm")
        if s.L > 1:
            if s.kappa_min is None or s.kappa_max is None:
                _fail("kappa_min", 0, "kappa_min and kappa_max required when L > 1")
            if s.kappa_max <= s.kappa_min:
                _fail("kappa_max", where("kappa_max"), "must exceed kappa_min")
            if s.farfield_in is not None:
                _fail("farfield_in", where("farfield_in"), "multi-frequency runs synthesize data")
        elif s.kappa is None and s.farfield_in is None:
            _fail("kappa", 0, "required for mode=esm")
    elif s.mode == "esm-multilevel":
        if s.R0 is None:
            _fail("R0", 0, "required for mode=esm-multilevel")
        if s.kappa is None:
            _fail("kappa", 0, "required for mode=esm-multilevel")
    elif s.kappa is None and s.farfield_in is None:
        _fail("kappa", 0, f"required for mode={s.mode}")


# ---------------------------------------------------------------------------
# Drivers
# ---------------------------------------------------------------------------
def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _manifest(path, scenario: Scenario, diagnostics: dict) -> None:
    """Write a manifest that is itself a valid scenario re-running the job."""
    lines = ["#bhman v1  (re-runnable scenario)"]
    for key in sorted(_PARSERS):
        value = getattr(scenario, key)
        if value is None:
            continue
        if key in ("center", "directions"):
            value = ",".join(_fmt(v) for v in value)
        lines.append(f"{key}={_fmt(value)}")
    for key in sorted(diagnostics):
        lines.append(f"# {key}={_fmt(diagnostics[key])}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _synthesize_matrix(s: Scenario):
    curve = make_named_curve(s.shape, s.center, s.scale)
    F = far_field_matrix(curve, s.kappa, s.N, n=s.n)
    return add_noise(F, s.delta, s.seed)


def _obtain_matrix(s: Scenario):
    if s.farfield_in is not None:
        return fileio.read_farfield(s.farfield_in)
    return _synthesize_matrix(s)


def _esm_columns(s: Scenario):
    """Far-field columns (L, J, N) for the configured directions/wavenumbers."""
    kappas = s.wavenumbers()
    angles = np.asarray(s.directions, dtype=float)
    if s.farfield_in is not None:
        F = fileio.read_farfield(s.farfield_in)
        grid_angles = 2.0 * np.pi * np.arange(F.size) / F.size
        cols = []
        for angle in angles:
            matches = np.where(np.abs(grid_angles - angle % (2 * np.pi)) < 1e-9)[0]
            if len(matches) == 0:
                raise ConfigError(
                    f"direction {angle!r} is not on the {F.size}-point grid of {s.farfield_in}"
                )
            cols.append(F.entries[:, matches[0]])
        return np.asarray([cols]), [F.kappa]
    curve = make_named_curve(s.shape, s.center, s.scale)
    dirs = np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    columns = [far_field_columns(curve, k, s.N, dirs, n=s.n).T for k in kappas]
    return np.asarray(columns), kappas


def _run_forward(s: Scenario, prefix: str):
    F = _synthesize_matrix(s)
    residual = reciprocity_residual(F)
    outputs = [f"{prefix}.ff"]
    fileio.write_farfield(outputs[0], F)
    return outputs, {"reciprocity_residual": residual}


def _run_lsm(s: Scenario, prefix: str):
    F = _obtain_matrix(s)
    residual = reciprocity_residual(F) if F.size % 2 == 0 else float("nan")
    meta = {"delta": s.delta, "seed": s.seed, "shape": s.shape or "file"}
    indicator = lsm.lsm_indicator(F, s.grid(), s.effective_alpha(), meta=meta)
    mask = lsm.classify(indicator, s.zeta)
    outputs = [f"{prefix}.ind", f"{prefix}.mask", f"{prefix}.pgm"]
    fileio.write_indicator(outputs[0], indicator)
    fileio.write_mask(outputs[1], indicator, mask)
    fileio.write_heatmap(outputs[2], indicator)
    return outputs, {"reciprocity_residual": residual, "mask_points": int(mask.sum())}


def _run_esm(s: Scenario, prefix: str):
    columns, kappas = _esm_columns(s)
    config = esm_mod.EsmConfig(
        grid=s.grid(), radius=s.R, wavenumbers=kappas,
        directions=list(s.directions), alpha=s.effective_alpha(),
    )
    meta = {"delta": s.delta, "seed": s.seed, "shape": s.shape or "file"}
    indicator = esm_mod.esm_indicator(columns, config, meta=meta)
    z = indicator.argmin_point()
    outputs = [f"{prefix}.ind", f"{prefix}.pgm", f"{prefix}.loc"]
    fileio.write_indicator(outputs[0], indicator)
    fileio.write_heatmap(outputs[1], indicator)
    result = esm_mod.LocalizationResult(center=z, radius=s.R, history=((0, s.R, z),))
    fileio.write_localization(outputs[2], result)
    return outputs, {"estimate_x": float(z[0]), "estimate_y": float(z[1])}


def _run_esm_multilevel(s: Scenario, prefix: str):
    columns, kappas = _esm_columns(s)
    column = columns[0, 0]
    grid = s.grid()
    region = (grid.xmin, grid.xmax, grid.ymin, grid.ymax)
    result = esm_mod.multilevel_esm(column, kappas[0], s.R0, region, alpha=s.effective_alpha())
    outputs = [f"{prefix}.loc"]
    fileio.write_localization(outputs[0], result)
    return outputs, {
        "estimate_x": float(result.center[0]),
        "estimate_y": float(result.center[1]),
        "final_radius": result.radius,
        "levels": len(result.history),
        "low_confidence": int(result.low_confidence),
    }


_DRIVERS = {
    "forward": _run_forward,
    "lsm": _run_lsm,
    "esm": _run_esm,
    "esm-multilevel": _run_esm_multilevel,
}


def run(scenario: Scenario, out: str | None = None):
    """Execute a scenario; returns (output paths, diagnostics dict).

    The manifest is always written last, as ``<out>.manifest``.
    """
    if out is not None:
        scenario = replace(scenario, out=out)
    prefix = scenario.out
    parent = Path(prefix).parent
    if parent != Path(""):
        parent.mkdir(parents=True, exist_ok=True)
    outputs, diagnostics = _DRIVERS[scenario.mode](scenario, prefix)
    manifest = f"{prefix}.manifest"
    _manifest(manifest, scenario, diagnostics)
    outputs.append(manifest)
    return outputs, diagnostics
