import argparse
import csv
import dataclasses
import json
import logging
import math
import os
import sys
import tempfile
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass
from enum import Enum, IntEnum
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np
from numpy.typing import NDArray

from keplerwave.angular import css_from_spread, css_profile, wrap_angle
from keplerwave.classical import (
    apsides,
    classical_period,
    kepler_position,
    orbit_from_energy,
)
from keplerwave.errors import (
    AccuracyError,
    ConfigError,
    DomainError,
    KeplerWaveError,
)
from keplerwave.ess import EssParams, PhysicalSpec, ess_build, ess_expectations
from keplerwave.radial import rss_expectations
from keplerwave.runge_lenz import (
    REFERENCE_DIAGNOSTICS,
    REFERENCE_SPEC,
    hl_from_spectrum,
    runge_lenz_diagnostics,
    z_surface,
)
from keplerwave.spectral import (
    GridField,
    SpectralState,
    evolve,
    expand,
    observables_vs_time,
    reconstruct,
)
from keplerwave.sqdt import (
    QuantumDefectTable,
    apsidal_precession,
    sqdt_build,
    sqdt_expand,
    sqdt_hamiltonian_expectation,
    starred_outer_apsis,
)

# ==========================================================================================
# ==========================================================================================

# File:    cli.py
# Date:    October 17, 2026
# Author:  keplerwave developers
# Purpose: This file contains the run configuration, the command-line parser, the
#          scenario drivers and the CSV/JSON emitters of the keplerwave command
# ==========================================================================================
# ==========================================================================================
# Insert Code here

logger = logging.getLogger(__name__)

ArrayR = NDArray[np.float64]

CONFIG_KEY = "config"
FLOAT_FMT = ".17g"
PANEL_TIMES = ("0", "1/3T", "0.5T", "2/3T", "T")
SERIES_TIMES = ("0:1.2T:121",)


class Scenario(Enum):
    """Workflows the command line can run"""

    CSS_PROFILE = "css-profile"
    BUILD = "build"
    EVOLVE = "evolve"
    GRID = "grid"
    OBSERVABLES = "observables"
    RL = "rl"
    Z_SURFACE = "z-surface"
    SQDT_BUILD = "sqdt-build"
    SQDT_EVOLVE = "sqdt-evolve"
    COMPARE = "compare"


# ==========================================================================================
# ==========================================================================================


class ExitStatus(IntEnum):
    """Process exit codes"""

    OK = 0
    CONFIG = 1
    SOLVER = 2
    ACCURACY = 3
    IO = 4


# ==========================================================================================
# ==========================================================================================


@dataclass
class RunResult:
    """Outcome of a scenario run

    Attributes:
        success (bool): True if every artifact was written
        data (ExitStatus): Exit status of the run
        message (str): Description of the result or the failure reason
        artifacts (tuple[str, ...]): Paths of the files written, in write order
    """

    success: bool
    data: ExitStatus
    message: str
    artifacts: tuple[str, ...] = ()


# ==========================================================================================
# ==========================================================================================


@dataclass(frozen=True)
class RunConfig:
    """
    Resolved configuration of one invocation.

    Built from defaults, then a JSON config file, then command-line flags. Times are
    strings such as ``"0.5T"`` (fraction of the classical period), ``"1/3T"``, plain
    atomic units ``"1200.0"`` or ranges ``"0:1.2T:121"`` (start, stop, count).
    """

    scenario: str
    n_bar: float | None = None
    l_bar: int | None = None
    dl: float | None = None
    l_bars: tuple[int, ...] = ()
    beta: int = 30
    dls: tuple[float, ...] = (0.5, 1.5, 2.5)
    defects: str | None = None
    simple_sqdt: bool = False
    times: tuple[str, ...] | None = None
    n_r: int = 200
    n_phi: int = 256
    r_min: float | None = None
    r_max: float | None = None
    a_range: tuple[float, ...] = (500.0, 4000.0)
    e_range: tuple[float, ...] = (0.1, 0.9)
    n_a: int = 20
    n_e: int = 20
    eta: float = 0.0
    out: str = "out"
    format: str = "csv"  # noqa: A003
    tol: float = 1e-6
    rl_n_r: int = 1200
    rl_n_phi: int = 2048
    rl_rtol: float = 1e-4
    rl_method: str = "grid"

    def validate(self) -> None:
        """
        Check the fields the scenario needs before any computation starts.

        :raises ConfigError: For a missing or inconsistent field
        """
        try:
            scenario = Scenario(self.scenario)
        except ValueError as exc:
            choices = ", ".join(s.value for s in Scenario)
            raise ConfigError(
                f"unknown scenario {self.scenario!r}; use one of {choices}"
            ) from exc
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.rl_method not in ("grid", "analytic"):
            raise ConfigError(f"rl_method must be grid or analytic: {self.rl_method!r}")
        for name in ("n_r", "n_phi", "n_a", "n_e", "rl_n_r", "rl_n_phi"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if not self.tol > 0.0 or not self.rl_rtol > 0.0:
            raise ConfigError("tolerances must be positive")
        if len(self.a_range) != 2 or len(self.e_range) != 2:
            raise ConfigError("a_range and e_range take two values each")

        if scenario is Scenario.CSS_PROFILE:
            if not self.dls:
                raise ConfigError("css-profile needs at least one dL in dls")
            return
        required = ["n_bar", "dl"] + ([] if scenario is Scenario.COMPARE else ["l_bar"])
        missing = [name for name in required if getattr(self, name) is None]
        if missing:
            raise ConfigError(f"scenario {self.scenario} needs {', '.join(missing)}")
        if scenario is Scenario.COMPARE and not self.l_bars:
            raise ConfigError("compare needs l_bars")

    # ------------------------------------------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        fields = dataclasses.fields(self)
        return {f.name: _jsonable(getattr(self, f.name)) for f in fields}


# ==========================================================================================
# ==========================================================================================
# CONFIGURATION


def _as_int(value: Any) -> int:
    if isinstance(value, bool):
        raise ValueError(f"expected an integer, got {value!r}")
    as_float = float(value)
    if not as_float.is_integer():
        raise ValueError(f"expected an integer, got {value!r}")
    return int(as_float)


# ------------------------------------------------------------------------------------------


def _as_bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.lower() in ("true", "false", "1", "0"):
        return value.lower() in ("true", "1")
    raise ValueError(f"expected a boolean, got {value!r}")


# ------------------------------------------------------------------------------------------


def _split(value: Any) -> list[Any]:
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]


# ------------------------------------------------------------------------------------------


def _optional(convert: Callable[[Any], Any]) -> Callable[[Any], Any]:
    return lambda value: None if value is None else convert(value)


# ------------------------------------------------------------------------------------------


_CONVERTERS: dict[str, Callable[[Any], Any]] = {
    "scenario": str,
    "n_bar": _optional(float),
    "l_bar": _optional(_as_int),
    "dl": _optional(float),
    "l_bars": lambda v: tuple(_as_int(x) for x in _split(v)),
    "beta": _as_int,
    "dls": lambda v: tuple(float(x) for x in _split(v)),
    "defects": _optional(str),
    "simple_sqdt": _as_bool,
    "times": _optional(lambda v: tuple(str(x) for x in _split(v))),
    "n_r": _as_int,
    "n_phi": _as_int,
    "r_min": _optional(float),
    "r_max": _optional(float),
    "a_range": lambda v: tuple(float(x) for x in _split(v)),
    "e_range": lambda v: tuple(float(x) for x in _split(v)),
    "n_a": _as_int,
    "n_e": _as_int,
    "eta": float,
    "out": str,
    "format": str,
    "tol": float,
    "rl_n_r": _as_int,
    "rl_n_phi": _as_int,
    "rl_rtol": float,
    "rl_method": str,
}


# ------------------------------------------------------------------------------------------


def config_from_mapping(data: Mapping[str, Any]) -> RunConfig:
    """
    Build a validated RunConfig from a flat mapping of configuration keys.

    Args:
        data: Keys as in the JSON config file; unknown keys are rejected

    Returns:
        The validated RunConfig

    Raises:
        ConfigError: For unknown keys, unconvertible values or missing fields
    """
    unknown = sorted(set(data) - set(_CONVERTERS))
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
    if data.get("scenario") is None:
        raise ConfigError("no scenario given")
    values: dict[str, Any] = {}
    for key, raw in data.items():
        try:
            values[key] = _CONVERTERS[key](raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid value for {key}: {raw!r}") from exc
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


# ------------------------------------------------------------------------------------------


def load_config_file(path: str | Path) -> dict[str, Any]:
    """Read a JSON config file into a mapping; ConfigError if it is not a JSON object"""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return data


# ------------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    """Argument parser; every flag defaults to absent so only given flags override"""
    parser = argparse.ArgumentParser(
        prog="keplerwave",
        description="Elliptical squeezed states of planar Rydberg atoms",
        argument_default=argparse.SUPPRESS,
    )
    parser.add_argument(
        "scenario", nargs="?", choices=[s.value for s in Scenario], help="workflow to run"
    )
    parser.add_argument("--config", help="JSON config file; flags override its keys")
    for flag, key in (
        ("--n-bar", "n_bar"),
        ("--l-bar", "l_bar"),
        ("--dl", "dl"),
        ("--l-bars", "l_bars"),
        ("--beta", "beta"),
        ("--dls", "dls"),
        ("--defects", "defects"),
        ("--times", "times"),
        ("--n-r", "n_r"),
        ("--n-phi", "n_phi"),
        ("--r-min", "r_min"),
        ("--r-max", "r_max"),
        ("--a-range", "a_range"),
        ("--e-range", "e_range"),
        ("--n-a", "n_a"),
        ("--n-e", "n_e"),
        ("--eta", "eta"),
        ("--out", "out"),
        ("--format", "format"),
        ("--tol", "tol"),
        ("--rl-n-r", "rl_n_r"),
        ("--rl-n-phi", "rl_n_phi"),
        ("--rl-rtol", "rl_rtol"),
        ("--rl-method", "rl_method"),
    ):
        parser.add_argument(flag, dest=key)
    parser.add_argument("--simple-sqdt", dest="simple_sqdt", action="store_true")
    return parser


# ------------------------------------------------------------------------------------------


def parse_args(argv: Sequence[str] | None = None) -> RunConfig:
    """
    Resolve defaults, the optional config file and the flags into a RunConfig.

    :param argv: Arguments without the program name; sys.argv[1:] when None
    :raises ConfigError: For unreadable config files or invalid settings
    """
    parser = build_parser()
    try:
        namespace = vars(parser.parse_args(argv))
    except SystemExit as exc:
        if exc.code in (0, None):
            raise
        raise ConfigError("invalid command line") from exc
    data: dict[str, Any] = {}
    config_path = namespace.pop("config", None)
    if config_path is not None:
        try:
            data.update(load_config_file(config_path))
        except OSError as exc:
            raise ConfigError(f"cannot read config file {config_path}: {exc}") from exc
    data.update(namespace)
    return config_from_mapping(data)


# ------------------------------------------------------------------------------------------


def parse_times(tokens: Sequence[str], period: float) -> ArrayR:
    """
    Convert time tokens to atomic units.

    Args:
        tokens: Entries like "0", "1200.5", "0.5T", "1/3T", "T" or "0:1.2T:121"
        period: Classical period that "T" stands for

    Returns:
        Times in atomic units, in token order

    Raises:
        ConfigError: For tokens that do not parse
    """

    def single(token: str) -> float:
        text = token.strip()
        try:
            if text.endswith("T"):
                factor = text[:-1].strip()
                return float(Fraction(factor) if factor else 1) * period
            return float(Fraction(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"cannot parse time {token!r}") from exc

    times: list[float] = []
    for token in tokens:
        parts = str(token).split(":")
        if len(parts) == 1:
            times.append(single(parts[0]))
            continue
        if len(parts) != 3:
            raise ConfigError(f"time ranges take start:stop:count, got {token!r}")
        try:
            count = int(parts[2])
        except ValueError as exc:
            raise ConfigError(f"invalid count in time range {token!r}") from exc
        if count < 1:
            raise ConfigError(f"time range count must be positive, got {count}")
        times.extend(np.linspace(single(parts[0]), single(parts[1]), count).tolist())
    if not times:
        raise ConfigError("no times given")
    return np.asarray(times, dtype=np.float64)


# ==========================================================================================
# ==========================================================================================
# EMITTERS


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, Enum):
        return value.value
    return value


# ------------------------------------------------------------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), FLOAT_FMT)


# ------------------------------------------------------------------------------------------


def _cell(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return _fmt(value)
    return str(value)


# ------------------------------------------------------------------------------------------


def _config_comment(config: Mapping[str, Any] | None) -> str:
    text = json.dumps(_jsonable(dict(config or {})), sort_keys=True)
    return f"# {CONFIG_KEY}: {text}\n"


# ------------------------------------------------------------------------------------------


def _write_json(path: Path, payload: Mapping[str, Any]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_jsonable(payload), fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")
    return path


# ------------------------------------------------------------------------------------------


def emit_grid(
    field: GridField,
    path: str | Path,
    fmt: str = "csv",
    config: Mapping[str, Any] | None = None,
) -> Path:
    """
    Write a GridField as CSV or JSON.

    CSV layout: comment lines describing the columns and the resolved config, a row
    starting with ``r`` holding the radial grid, a row starting with ``phi`` holding the
    angular grid, then one row of r|Psi|^2 per radius. Floats carry 17 significant
    digits.

    Args:
        field: Density to write
        path: Output file
        fmt: "csv" or "json"
        config: Resolved run configuration for provenance

    Returns:
        The path written

    Raises:
        DomainError: For an empty grid or an unknown format
        OSError: If the file cannot be written
    """
    if field.r_grid.size == 0 or field.phi_grid.size == 0:
        raise DomainError("cannot emit an empty grid")
    target = Path(path)
    if fmt == "json":
        return _write_json(
            target,
            {
                "t": field.t,
                "r_grid": field.r_grid,
                "phi_grid": field.phi_grid,
                "values": field.values,
                CONFIG_KEY: dict(config or {}),
            },
        )
    if fmt != "csv":
        raise DomainError(f"unknown output format {fmt!r}")
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# keplerwave grid field r|Psi|^2 at t = {_fmt(field.t)} a.u.\n")
        fh.write("# row r: radii (bohr); row phi: angles (rad); rows after: r|Psi|^2\n")
        fh.write(_config_comment(config))
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["r", *map(_fmt, field.r_grid)])
        writer.writerow(["phi", *map(_fmt, field.phi_grid)])
        for row in field.values:
            writer.writerow([_fmt(v) for v in row])
    return target


# ------------------------------------------------------------------------------------------


def read_grid(path: str | Path) -> GridField:
    """Parse a grid written by emit_grid in either format"""
    target = Path(path)
    if target.suffix == ".json":
        with open(target, encoding="utf-8") as fh:
            data = json.load(fh)
        return GridField(
            r_grid=np.asarray(data["r_grid"], dtype=np.float64),
            phi_grid=np.asarray(data["phi_grid"], dtype=np.float64),
            values=np.asarray(data["values"], dtype=np.float64),
            t=float(data["t"]),
        )
    with open(target, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    t = float(lines[0].split("t = ")[1].split()[0])
    rows = list(csv.reader(line for line in lines if not line.startswith("#")))
    return GridField(
        r_grid=np.array([float(x) for x in rows[0][1:]]),
        phi_grid=np.array([float(x) for x in rows[1][1:]]),
        values=np.array([[float(x) for x in row] for row in rows[2:]]),
        t=t,
    )


# ------------------------------------------------------------------------------------------


def emit_table(
    columns: Mapping[str, Any],
    path: str | Path,
    fmt: str,
    title: str,
    config: Mapping[str, Any] | None = None,
) -> Path:
    """Write equal-length columns as CSV (header comments, then a name row) or JSON"""
    target = Path(path)
    if fmt == "json":
        return _write_json(
            target,
            {"title": title, "columns": dict(columns), CONFIG_KEY: dict(config or {})},
        )
    target.parent.mkdir(parents=True, exist_ok=True)
    names = list(columns)
    data = [np.atleast_1d(np.asarray(columns[name])) for name in names]
    with open(target, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# keplerwave {title}\n")
        fh.write(f"# columns: {', '.join(names)}\n")
        fh.write(_config_comment(config))
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(names)
        for i in range(data[0].size if data else 0):
            writer.writerow([_cell(col[i]) for col in data])
    return target


# ==========================================================================================
# ==========================================================================================
# SCENARIOS


def _spec(cfg: RunConfig, l_bar: int | None = None) -> PhysicalSpec:
    return PhysicalSpec(
        n_bar=float(cfg.n_bar),  # type: ignore[arg-type]
        l_bar=int(l_bar if l_bar is not None else cfg.l_bar),  # type: ignore[arg-type]
        dl=float(cfg.dl),  # type: ignore[arg-type]
    )


# ------------------------------------------------------------------------------------------


def _table(cfg: RunConfig) -> QuantumDefectTable:
    if cfg.defects is None:
        return QuantumDefectTable.lithium()
    return QuantumDefectTable.from_json(cfg.defects)


# ------------------------------------------------------------------------------------------


def _params_record(p: EssParams) -> dict[str, Any]:
    return {
        "alpha": p.alpha,
        "beta": p.beta,
        "gamma0": p.gamma0,
        "gamma1": p.gamma1,
        "delta": p.delta,
        "phi0": p.phi0,
    }


# ------------------------------------------------------------------------------------------


def _polar_axes(cfg: RunConfig, r_out: float) -> tuple[ArrayR, ArrayR]:
    r_max = cfg.r_max if cfg.r_max is not None else 1.3 * r_out
    r_min = cfg.r_min if cfg.r_min is not None else r_max / cfg.n_r
    if not 0.0 < r_min < r_max:
        raise ConfigError(f"grid needs 0 < r_min < r_max, got {r_min}, {r_max}")
    r = np.linspace(r_min, r_max, cfg.n_r)
    phi = -math.pi + 2.0 * math.pi * np.arange(cfg.n_phi) / cfg.n_phi
    return r, phi


# ------------------------------------------------------------------------------------------


def _series_columns(s: SpectralState, times: ArrayR, period: float) -> dict[str, Any]:
    series = observables_vs_time(s, times)
    return {
        "t_au": series.times,
        "t_over_T": series.times / period,
        "r": series.r,
        "r2": series.r2,
        "dr": series.dr,
        "cos_phi": series.cos_phi,
        "sin_phi": series.sin_phi,
        "localization": series.localization,
        "autocorrelation": series.autocorrelation,
    }


# ------------------------------------------------------------------------------------------


def _emit_panels(
    s: SpectralState,
    cfg: RunConfig,
    r_out: float,
    stem: str,
    config: Mapping[str, Any],
) -> tuple[list[str], list[dict[str, float]]]:
    period = classical_period(float(cfg.n_bar))[0]  # type: ignore[arg-type]
    times = parse_times(cfg.times or PANEL_TIMES, period)
    r, phi = _polar_axes(cfg, r_out)
    out = Path(cfg.out)
    paths: list[str] = []
    peaks: list[dict[str, float]] = []
    for index, t in enumerate(times):
        field = reconstruct(evolve(s, float(t)), r, phi, keep_amplitude=False)
        target = out / f"{stem}_t{index}.{cfg.format}"
        paths.append(str(emit_grid(field, target, cfg.format, config)))
        peak_r, peak_phi = field.peak()
        peaks.append({"t_au": float(t), "peak_r": peak_r, "peak_phi": peak_phi})
    return paths, peaks


# ------------------------------------------------------------------------------------------


def _run_css_profile(cfg: RunConfig, config: Mapping[str, Any]) -> list[str]:
    phi = -math.pi + 2.0 * math.pi * np.arange(cfg.n_phi) / cfg.n_phi
    columns: dict[str, Any] = {"phi": phi}
    for dl in cfg.dls:
        columns[f"dL={dl:g}"] = css_profile(css_from_spread(dl, cfg.beta), phi)
    target = Path(cfg.out) / f"css-profile.{cfg.format}"
    return [str(emit_table(columns, target, cfg.format, "angular profiles", config))]


# ------------------------------------------------------------------------------------------


def _run_build(cfg: RunConfig, config: Mapping[str, Any]) -> list[str]:
    spec = _spec(cfg)
    p = ess_build(spec)
    r_in, r_out = apsides(spec.n_bar, spec.l_bar)
    t_au, t_s = classical_period(spec.n_bar)
    record = {
        "params": _params_record(p),
        "expectations": dataclasses.asdict(ess_expectations(p)),
        "geometry": {"r_in": r_in, "r_out": r_out, "T_au": t_au, "T_ps": t_s * 1e12},
        CONFIG_KEY: dict(config),
    }
    return [str(_write_json(Path(cfg.out) / "build.json", record))]


# ------------------------------------------------------------------------------------------


def _run_evolve(cfg: RunConfig, config: Mapping[str, Any]) -> list[str]:
    p = ess_build(_spec(cfg))
    s = expand(p, cfg.tol)
    ex = ess_expectations(p)
    l_mean, l2_mean = s.l_moments()
    record = {
        "params": _params_record(p),
        "window": {"n": list(s.window[0]), "l": list(s.window[1])},
        "tail_mass": s.tail_mass,
        "norm": s.norm,
        "energy_spectral": s.mean_energy(),
        "energy_closed_form": ex.h,
        "l_mean": l_mean,
        "l_variance": l2_mean - l_mean**2,
        "hl_spectral": hl_from_spectrum(s),
        CONFIG_KEY: dict(config),
    }
    paths = [str(_write_json(Path(cfg.out) / "evolve.json", record))]
    n_grid, l_grid = np.meshgrid(s.n_values, s.l_values, indexing="ij")
    mask = s.probabilities > 0.0
    columns = {
        "n": n_grid[mask],
        "l": l_grid[mask],
        "re": s.coeffs.real[mask],
        "im": s.coeffs.imag[mask],
        "probability": s.probabilities[mask],
        "energy": s.energies[mask],
    }
    target = Path(cfg.out) / f"evolve_coefficients.{cfg.format}"
    title = "expansion coefficients"
    paths.append(str(emit_table(columns, target, cfg.format, title, config)))
    return paths


# ------------------------------------------------------------------------------------------


def _run_grid(cfg: RunConfig, config: Mapping[str, Any]) -> list[str]:
    spec = _spec(cfg)
    s = expand(ess_build(spec), cfg.tol)
    paths, _ = _emit_panels(s, cfg, spec.r_out, "grid", config)
    return paths


# ------------------------------------------------------------------------------------------


def _run_observables(cfg: RunConfig, config: Mapping[str, Any]) -> list[str]:
    spec = _spec(cfg)
    period = classical_period(spec.n_bar)[0]
    p = ess_build(spec)
    s = expand(p, cfg.tol)
    times = parse_times(cfg.times or SERIES_TIMES, period)
    target = Path(cfg.out) / f"observables.{cfg.format}"
    columns = _series_columns(s, times, period)
    orbit = orbit_from_energy(spec.energy, spec.l_bar, p.phi0)
    columns["r_classical"], columns["phi_classical"] = kepler_position(orbit, times)
    title = "observables versus time"
    return [str(emit_table(columns, target, cfg.format, title, config))]


# ------------------------------------------------------------------------------------------


def _run_rl(cfg: RunConfig, config: Mapping[str, Any]) -> list[str]:
    spec = _spec(cfg)
    p = ess_build(spec)
    diag = runge_lenz_diagnostics(
        p,
        "analytic" if cfg.rl_method == "analytic" else "grid",
        n_r=cfg.rl_n_r,
        n_phi=cfg.rl_n_phi,
        rtol=cfg.rl_rtol,
    )
    computed = {"product": diag.product, "abs_hl": abs(diag.hl), "z": diag.z}
    same_spec = (spec.n_bar, spec.l_bar, spec.dl) == tuple(REFERENCE_SPEC.values())
    reference = {
        "spec": dict(REFERENCE_SPEC),
        "applies": same_spec,
        "values": dict(REFERENCE_DIAGNOSTICS),
        "ratio": (
            {k: computed[k] / v for k, v in REFERENCE_DIAGNOSTICS.items()}
            if same_spec
            else None
        ),
    }
    record = {
        "params": _params_record(p),
        "diagnostics": dataclasses.asdict(diag),
        "product": diag.product,
        "abs_hl": abs(diag.hl),
        "reference": reference,
        CONFIG_KEY: dict(config),
    }
    return [str(_write_json(Path(cfg.out) / "rl.json", record))]


# ------------------------------------------------------------------------------------------


def _run_z_surface(cfg: RunConfig, config: Mapping[str, Any]) -> list[str]:
    p = ess_build(_spec(cfg))
    dr = rss_expectations(p.radial).dr
    a = np.linspace(cfg.a_range[0], cfg.a_range[1], cfg.n_a)
    e = np.linspace(cfg.e_range[0], cfg.e_range[1], cfg.n_e)
    surf = z_surface(a, e, dr, float(cfg.dl), cfg.eta)  # type: ignore[arg-type]
    a_col, e_col = np.meshgrid(surf.a, surf.e, indexing="ij")
    columns = {
        "a": a_col.ravel(),
        "e": e_col.ravel(),
        "beta": surf.beta.ravel(),
        "beta_used": surf.beta_used.ravel(),
        "z": surf.z.ravel(),
    }
    target = Path(cfg.out) / f"z-surface.{cfg.format}"
    title = "localization measure Z"
    return [str(emit_table(columns, target, cfg.format, title, config))]


# ------------------------------------------------------------------------------------------


def _run_sqdt_build(cfg: RunConfig, config: Mapping[str, Any]) -> list[str]:
    spec = _spec(cfg)
    table = _table(cfg)
    p = sqdt_build(spec, table, simple=cfg.simple_sqdt)
    s = sqdt_expand(p, table, cfg.tol)
    record = {
        "params": _params_record(p),
        "r_out_starred": starred_outer_apsis(spec, table),
        "n_bar_starred": spec.n_bar - table.defect(spec.l_bar),
        "energy_sqdt": sqdt_hamiltonian_expectation(s, table) / s.norm,
        "tail_mass": s.tail_mass,
        "table": {"defects": dict(table.defects), "shifts": dict(table.shifts)},
        CONFIG_KEY: dict(config),
    }
    return [str(_write_json(Path(cfg.out) / "sqdt-build.json", record))]


# ------------------------------------------------------------------------------------------


def _run_sqdt_evolve(cfg: RunConfig, config: Mapping[str, Any]) -> list[str]:
    spec = _spec(cfg)
    table = _table(cfg)
    p = sqdt_build(spec, table, simple=cfg.simple_sqdt)
    s = sqdt_expand(p, table, cfg.tol)
    r_out = starred_outer_apsis(spec, table)
    paths, peaks = _emit_panels(s, cfg, r_out, "sqdt-evolve", config)
    period = classical_period(spec.n_bar)[0]
    times = np.array([peak["t_au"] for peak in peaks])

    hydrogen = expand(ess_build(spec), cfg.tol)
    r, phi = _polar_axes(cfg, r_out)
    snapshots = [
        reconstruct(evolve(hydrogen, float(t)), r, phi, keep_amplitude=False)
        for t in times
    ]
    hydrogen_phi = np.array([snap.peak()[1] for snap in snapshots])
    peak_phi = np.array([peak["peak_phi"] for peak in peaks])
    offsets = np.array([wrap_angle(x) for x in peak_phi - hydrogen_phi])

    target = Path(cfg.out) / f"sqdt-evolve_series.{cfg.format}"
    columns = _series_columns(s, times, period)
    columns["peak_phi"] = peak_phi
    columns["peak_phi_hydrogen"] = hydrogen_phi
    columns["peak_phi_offset"] = offsets
    paths.append(str(emit_table(columns, target, cfg.format, "defect dynamics", config)))

    precession = apsidal_precession(spec.l_bar, table)
    if precession == 0.0:
        note = (
            f"defects are uniform in |l| around l_bar = {spec.l_bar}; the packet does "
            "not precess relative to hydrogen and any peak offset comes from the "
            "starred period"
        )
    else:
        note = f"apsidal precession of {precession:.6g} rad per radial period"
    summary = {
        "defect_at_l_bar": table.defect(spec.l_bar),
        "precession_per_period": precession,
        "period_starred": classical_period(spec.n_bar - table.defect(spec.l_bar))[0],
        "times": times,
        "peak_phi_offset": offsets,
        "max_abs_offset": float(np.max(np.abs(offsets))),
        "note": note,
        CONFIG_KEY: dict(config),
    }
    logger.info("Defect precession", extra={"precession": precession, "note": note})
    paths.append(str(_write_json(Path(cfg.out) / "sqdt-evolve.json", summary)))
    return paths


# ------------------------------------------------------------------------------------------


def _run_compare(cfg: RunConfig, config: Mapping[str, Any]) -> list[str]:
    paths: list[str] = []
    summary: dict[str, Any] = {}
    r_out = max(_spec(cfg, l_bar).r_out for l_bar in cfg.l_bars)
    for l_bar in cfg.l_bars:
        s = expand(ess_build(_spec(cfg, l_bar)), cfg.tol)
        written, peaks = _emit_panels(s, cfg, r_out, f"compare_l{l_bar}", config)
        paths.extend(written)
        summary[str(l_bar)] = peaks
    paths.append(
        str(
            _write_json(
                Path(cfg.out) / "compare.json", {"peaks": summary, CONFIG_KEY: config}
            )
        )
    )
    return paths


# ------------------------------------------------------------------------------------------


_SCENARIOS: dict[Scenario, Callable[[RunConfig, Mapping[str, Any]], list[str]]] = {
    Scenario.CSS_PROFILE: _run_css_profile,
    Scenario.BUILD: _run_build,
    Scenario.EVOLVE: _run_evolve,
    Scenario.GRID: _run_grid,
    Scenario.OBSERVABLES: _run_observables,
    Scenario.RL: _run_rl,
    Scenario.Z_SURFACE: _run_z_surface,
    Scenario.SQDT_BUILD: _run_sqdt_build,
    Scenario.SQDT_EVOLVE: _run_sqdt_evolve,
    Scenario.COMPARE: _run_compare,
}


# ------------------------------------------------------------------------------------------


def status_for(exc: BaseException) -> ExitStatus:
    """Exit status an exception maps onto"""
    if isinstance(exc, (ConfigError, DomainError)):
        return ExitStatus.CONFIG
    if isinstance(exc, AccuracyError):
        return ExitStatus.ACCURACY
    if isinstance(exc, OSError):
        return ExitStatus.IO
    return ExitStatus.SOLVER


# ------------------------------------------------------------------------------------------


def report_failure(status: ExitStatus, message: str) -> None:
    """Write the one-line machine-parseable failure reason to stderr"""
    reason = " ".join(str(message).split())
    sys.stderr.write(f"keplerwave: error={status.name} reason={reason}\n")


# ------------------------------------------------------------------------------------------


def _publish(staged: Sequence[str], staging: Path, out: Path) -> list[str]:
    """Move finished artifacts from the staging directory to their final paths"""
    paths: list[str] = []
    for path in staged:
        final = out / Path(path).relative_to(staging)
        final.parent.mkdir(parents=True, exist_ok=True)
        os.replace(path, final)
        paths.append(str(final))
    return paths


# ------------------------------------------------------------------------------------------


def run(config: RunConfig) -> RunResult:
    """
    Run one scenario and write its artifacts.

    Artifacts are staged under the output directory and moved into place only after the
    whole scenario succeeds. A failed run leaves no files.

    Args:
        config: Resolved configuration

    Returns:
        RunResult whose data is the exit status; failures also write a one-line reason
        to stderr
    """
    try:
        config.validate()
        scenario = Scenario(config.scenario)
        out = Path(config.out)
        out.mkdir(parents=True, exist_ok=True)
        logger.info(
            "Starting scenario", extra={"scenario": scenario.value, "out": config.out}
        )
        with tempfile.TemporaryDirectory(prefix=".staging-", dir=out) as staging:
            staged = _SCENARIOS[scenario](
                dataclasses.replace(config, out=staging), config.to_dict()
            )
            paths = _publish(staged, Path(staging), out)
    except (KeplerWaveError, OSError) as exc:
        status = status_for(exc)
        logger.error("Scenario failed", extra={"status": status.name, "reason": str(exc)})
        report_failure(status, str(exc))
        return RunResult(False, status, str(exc))
    for path in paths:
        logger.info("Wrote artifact", extra={"path": path})
    message = f"{config.scenario} wrote {len(paths)} files"
    return RunResult(True, ExitStatus.OK, message, tuple(paths))


# ==========================================================================================
# ==========================================================================================
# eof
