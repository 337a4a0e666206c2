"""Run configuration: an INI file with sections, or a JSON file carrying a ``config`` object.

Lengths are in nm, energies in eV and flux in units of Phi0.  A JSON document
written by the CLI embeds the configuration it was produced from, so it can be
fed back as ``--config`` and reproduces the same rows.
"""

from __future__ import annotations

import configparser
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .cavity_modes import CavityGeometry, ModeIndex
from .errors import ValidationError
from .numerics import Tolerance

ENV_VAR = "ABCOUPLING_CONFIG"
SWEEP_PARAMETERS = ("l", "a_over_R", "flux", "R")
FORMATS = ("csv", "json")


class ConfigError(ValidationError):
    """Malformed or missing configuration."""


@dataclass(frozen=True)
class SolenoidSpec:
    flux_phi0: float
    a_over_R: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.flux_phi0):
            raise ConfigError(f"flux must be finite, got {self.flux_phi0!r}")
        if not 0.0 <= self.a_over_R < 1.0:
            raise ConfigError(f"a/R must lie in [0, 1), got {self.a_over_R!r}")


@dataclass(frozen=True)
class GridSpec:
    start: float
    stop: float
    count: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ConfigError(f"grid needs at least one point, got {self.count}")
        if self.count > 1 and not self.stop > self.start:
            raise ConfigError(f"grid needs stop > start, got {self.start!r}..{self.stop!r}")

    def points(self) -> list[float]:
        if self.count == 1:
            return [self.start]
        step = (self.stop - self.start) / (self.count - 1)
        pts = [self.start + i * step for i in range(self.count)]
        pts[-1] = self.stop
        return pts


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.parameter not in SWEEP_PARAMETERS:
            raise ConfigError(f"sweep parameter must be one of {SWEEP_PARAMETERS}, got {self.parameter!r}")
        if not self.values:
            raise ConfigError("sweep needs at least one value")
        if self.parameter == "l" and any(v != int(v) or v < 0 for v in self.values):
            raise ConfigError("sweep over l needs non-negative integers")


@dataclass(frozen=True)
class RunConfig:
    R_nm: float = 100.0
    d_nm: float = 100.0
    U_eV: float | None = None  # None means hard wall
    modes: tuple[ModeIndex, ...] = (ModeIndex(1, 0, 1),)
    solenoids: tuple[SolenoidSpec, ...] = (SolenoidSpec(1.0, 0.1),)
    tolerance: Tolerance = field(default_factory=Tolerance)
    output_format: str = "csv"
    output_path: str | None = None
    density_mode: ModeIndex | None = None
    density_rho: GridSpec = GridSpec(0.0, 1.5, 61)
    density_z: GridSpec = GridSpec(-1.0, 1.0, 41)
    sweep: SweepSpec | None = None

    def __post_init__(self) -> None:
        if self.output_format not in FORMATS:
            raise ConfigError(f"output format must be csv or json, got {self.output_format!r}")
        if not self.modes:
            raise ConfigError("at least one mode is required")
        if not self.solenoids:
            raise ConfigError("at least one solenoid is required")
        self.geometry()  # validate lengths and barrier

    def geometry(self) -> CavityGeometry:
        return CavityGeometry.from_nm(self.R_nm, self.d_nm, self.U_eV)

    def to_dict(self) -> dict[str, Any]:
        return {
            "geometry": {"R_nm": self.R_nm, "d_nm": self.d_nm, "U_eV": "hard_wall" if self.U_eV is None else self.U_eV},
            "modes": [[m.n, m.l, m.m] for m in self.modes],
            "solenoid": [[s.flux_phi0, s.a_over_R] for s in self.solenoids],
            "tolerance": {"rel": self.tolerance.rel, "abs": self.tolerance.abs, "max_depth": self.tolerance.max_depth},
            "output": {"format": self.output_format, "path": self.output_path},
            "density": {
                "mode": None if self.density_mode is None else [self.density_mode.n, self.density_mode.l, self.density_mode.m],
                "rho_over_R": [self.density_rho.start, self.density_rho.stop, self.density_rho.count],
                "z_over_d": [self.density_z.start, self.density_z.stop, self.density_z.count],
            },
            "sweep": None if self.sweep is None else {"parameter": self.sweep.parameter, "values": list(self.sweep.values)},
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunConfig":
        try:
            geo = data.get("geometry", {})
            u = geo.get("U_eV", "hard_wall")
            kwargs: dict[str, Any] = {
                "R_nm": float(geo.get("R_nm", 100.0)),
                "d_nm": float(geo.get("d_nm", 100.0)),
                "U_eV": None if u in (None, "hard_wall") else float(u),
            }
            if "modes" in data:
                kwargs["modes"] = tuple(ModeIndex(*map(int, t)) for t in data["modes"])
            if "solenoid" in data:
                kwargs["solenoids"] = tuple(SolenoidSpec(float(f), float(a)) for f, a in data["solenoid"])
            if "tolerance" in data:
                t = data["tolerance"]
                kwargs["tolerance"] = Tolerance(float(t["rel"]), float(t["abs"]), int(t.get("max_depth", 60)))
            out = data.get("output", {})
            kwargs["output_format"] = out.get("format", "csv")
            kwargs["output_path"] = out.get("path")
            dens = data.get("density", {})
            if dens.get("mode") is not None:
                kwargs["density_mode"] = ModeIndex(*map(int, dens["mode"]))
            if "rho_over_R" in dens:
                kwargs["density_rho"] = _grid(dens["rho_over_R"])
            if "z_over_d" in dens:
                kwargs["density_z"] = _grid(dens["z_over_d"])
            sw = data.get("sweep")
            if sw is not None:
                kwargs["sweep"] = SweepSpec(sw["parameter"], tuple(float(v) for v in sw["values"]))
        except ValidationError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed configuration: {exc}") from exc
        return cls(**kwargs)


def _grid(triple: Any) -> GridSpec:
    start, stop, count = triple
    return GridSpec(float(start), float(stop), int(count))


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.replace(";", ",").split(",") if t.strip()]


def _parse_ini(text: str, source: str) -> dict[str, Any]:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    data: dict[str, Any] = {}
    try:
        if parser.has_section("geometry"):
            g = parser["geometry"]
            data["geometry"] = {
                "R_nm": g.get("R_nm", "100"),
                "d_nm": g.get("d_nm", "100"),
                "U_eV": g.get("U_eV", "hard_wall").strip(),
            }
        if parser.has_section("modes"):
            # modes = 1 0 1; 1 1 1
            raw = parser["modes"].get("modes", "")
            data["modes"] = [t.split() for t in raw.split(";") if t.strip()]
        if parser.has_section("solenoid"):
            s = parser["solenoid"]
            fluxes = _floats(s.get("flux_phi0", "1"))
            radii = _floats(s.get("a_over_R", "0.1"))
            data["solenoid"] = [[f, a] for f in fluxes for a in radii]
        if parser.has_section("tolerance"):
            t = parser["tolerance"]
            data["tolerance"] = {
                "rel": t.get("rel", "1e-12"),
                "abs": t.get("abs", "1e-15"),
                "max_depth": t.get("max_depth", "60"),
            }
        if parser.has_section("output"):
            o = parser["output"]
            data["output"] = {"format": o.get("format", "csv"), "path": o.get("path")}
        if parser.has_section("density"):
            d = parser["density"]
            dens: dict[str, Any] = {}
            if "mode" in d:
                dens["mode"] = d["mode"].split()
            if "rho_over_R" in d:
                dens["rho_over_R"] = d["rho_over_R"].split()
            if "z_over_d" in d:
                dens["z_over_d"] = d["z_over_d"].split()
            data["density"] = dens
        if parser.has_section("sweep"):
            w = parser["sweep"]
            data["sweep"] = {"parameter": w.get("parameter", "").strip(), "values": _floats(w.get("values", ""))}
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    return data


def load_config(path: str | os.PathLike[str] | None = None) -> RunConfig:
    """Read ``path``, else the file named by $ABCOUPLING_CONFIG, else the built-in defaults."""
    if path is None:
        path = os.environ.get(ENV_VAR) or None
    if path is None:
        return RunConfig()
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {p}") from exc
    except OSError as exc:
        raise ConfigError(f"cannot read config file {p}: {exc.strerror}") from exc
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{p}: invalid JSON: {exc}") from exc
        data = doc.get("config", doc) if isinstance(doc, dict) else None
        if not isinstance(data, dict):
            raise ConfigError(f"{p}: expected a JSON object")
        return RunConfig.from_dict(data)
    return RunConfig.from_dict(_parse_ini(text, str(p)))
