"""Experiment configuration: TOML-syntax parsing, emission and sweep specs.

File layout::

    model = "qg"            # qg | cg
    heater_on = true
    mode = "nearest_only"   # nearest_only | full_pairwise
    seed = 0
    latitude = 45.4         # deg, used when omega_perp is not given
    # omega_perp = 5.1e-5   # rad/s, rotation component normal to the loops

    [superfluid]  T_lambda, rho_lambda, T, epsilon_r, allow_outside_regime
    [geometry]    L, sigma, d, loop_area
    [drive]       f_J, delta_d, f_m, E_field, waveform
    [noise]       vortex_rate, vortex_jump_rms, baseline_drift_bound, temp_rms,
                  temp_corr_time, rotation_noise_asd, readout_noise_rms
    [coupling]    form_factor (number or "line"), field_orientation, E_max
    [run]         duration, sample_rate, readout_mode, shots_per_sample
"""
from __future__ import annotations

import copy
import dataclasses
import math
import sys
from dataclasses import dataclass, field
from typing import Any

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .constants import OMEGA_EARTH
from .coupling import PUBLISHED_FORM_FACTOR, Orientation, form_factor_line
from .interferometer import Model, PairMode
from .noise_sim import NoiseParams
from .superfluid import DriveParams, Geometry, SuperfluidParams

PADOVA_LATITUDE = 45.4


class ConfigError(ValueError):
    pass


@dataclass
class CouplingParams:
    form_factor: float | str = PUBLISHED_FORM_FACTOR
    field_orientation: str = Orientation.PERPENDICULAR.value
    E_max: float = 1e9


@dataclass
class RunParams:
    duration: float = 3600.0
    sample_rate: float = 100.0
    readout_mode: str = "gaussian"
    shots_per_sample: int = 10_000


@dataclass
class ExperimentConfig:
    superfluid: SuperfluidParams = field(default_factory=SuperfluidParams)
    geometry: Geometry = field(default_factory=Geometry)
    drive: DriveParams = field(default_factory=DriveParams)
    noise: NoiseParams = field(default_factory=NoiseParams)
    coupling: CouplingParams = field(default_factory=CouplingParams)
    run: RunParams = field(default_factory=RunParams)
    model: str = Model.QG.value
    heater_on: bool = True
    mode: str = PairMode.NEAREST_ONLY.value
    seed: int = 0
    latitude: float = PADOVA_LATITUDE
    omega_perp: float | None = None

    def __post_init__(self):
        if self.omega_perp is None:
            # loops in a vertical plane, turned to catch the horizontal component
            self.omega_perp = OMEGA_EARTH * math.cos(math.radians(self.latitude))

    def form_factor(self) -> float:
        ff = self.coupling.form_factor
        if ff == "line":
            return form_factor_line(self.geometry.L, self.geometry.d)
        return float(ff)

    def validate(self) -> "ExperimentConfig":
        self.superfluid.validate()
        self.geometry.validate()
        self.drive.validate(self.geometry.d)
        self.noise.validate()
        _choice("model", self.model, [m.value for m in Model])
        _choice("mode", self.mode, [m.value for m in PairMode])
        _choice("coupling.field_orientation", self.coupling.field_orientation, [o.value for o in Orientation])
        _choice("run.readout_mode", self.run.readout_mode, ["gaussian", "shot"])
        ff = self.coupling.form_factor
        if isinstance(ff, str):
            _choice("coupling.form_factor", ff, ["line"])
        elif not ff > 0:
            raise ConfigError(f"coupling.form_factor must be > 0 or 'line', got {ff}")
        for key in ("duration", "sample_rate"):
            if not getattr(self.run, key) > 0:
                raise ConfigError(f"run.{key} must be > 0")
        if not self.run.shots_per_sample >= 1:
            raise ConfigError("run.shots_per_sample must be >= 1")
        if not self.coupling.E_max > 0:
            raise ConfigError("coupling.E_max must be > 0")
        if not isinstance(self.heater_on, bool):
            raise ConfigError(f"heater_on must be a boolean, got {self.heater_on!r}")
        return self


_SECTIONS = {
    "superfluid": SuperfluidParams,
    "geometry": Geometry,
    "drive": DriveParams,
    "noise": NoiseParams,
    "coupling": CouplingParams,
    "run": RunParams,
}
_TOP_KEYS = ("model", "heater_on", "mode", "seed", "latitude", "omega_perp")


def _choice(key, value, allowed):
    if value not in allowed:
        raise ConfigError(f"{key} must be one of {allowed}, got {value!r}")


def from_dict(data: dict[str, Any]) -> ExperimentConfig:
    """Build and validate a config from a nested mapping; unknown keys are errors."""
    kwargs = {}
    for key, value in data.items():
        if key in _SECTIONS:
            if not isinstance(value, dict):
                raise ConfigError(f"{key} must be a table")
            cls = _SECTIONS[key]
            names = {f.name for f in dataclasses.fields(cls)}
            for sub in value:
                if sub not in names:
                    raise ConfigError(f"unknown key {key}.{sub}")
            try:
                kwargs[key] = cls(**value)
            except TypeError as exc:
                raise ConfigError(f"{key}: {exc}") from None
        elif key in _TOP_KEYS:
            kwargs[key] = value
        else:
            raise ConfigError(f"unknown key {key}")
    cfg = ExperimentConfig(**kwargs)
    try:
        cfg.validate()
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return cfg


def parse_config(text: str) -> ExperimentConfig:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    return from_dict(data)


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def to_dict(cfg: ExperimentConfig) -> dict[str, Any]:
    return dataclasses.asdict(cfg)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    raise TypeError(f"cannot encode {value!r}")


def emit_config(cfg: ExperimentConfig) -> str:
    """Serialize a resolved config; ``parse_config(emit_config(c)) == c``."""
    data = to_dict(cfg)
    lines = [f"{k} = {_fmt(data[k])}" for k in _TOP_KEYS]
    for section in _SECTIONS:
        lines.append("")
        lines.append(f"[{section}]")
        lines.extend(f"{k} = {_fmt(v)}" for k, v in data[section].items())
    return "\n".join(lines) + "\n"


def get_path(cfg: ExperimentConfig, path: str):
    obj = cfg
    for part in path.split("."):
        if not hasattr(obj, part):
            raise ConfigError(f"unknown parameter {path}")
        obj = getattr(obj, part)
    return obj


def with_value(cfg: ExperimentConfig, path: str, value) -> ExperimentConfig:
    """Copy of ``cfg`` with the dotted parameter replaced, re-validated."""
    data = to_dict(cfg)
    parts = path.split(".")
    target = data
    for part in parts[:-1]:
        if part not in target or not isinstance(target[part], dict):
            raise ConfigError(f"unknown parameter {path}")
        target = target[part]
    if parts[-1] not in target:
        raise ConfigError(f"unknown parameter {path}")
    target[parts[-1]] = value
    # derived defaults follow the swept parameter unless set explicitly
    if path in ("geometry.L",) and cfg.geometry.loop_area == cfg.geometry.L**2:
        data["geometry"]["loop_area"] = None
    if path == "latitude":
        data["omega_perp"] = None
    if path == "superfluid.T_lambda" and cfg.superfluid.T == cfg.superfluid.T_lambda - 20e-6:
        data["superfluid"]["T"] = None
    return from_dict(_drop_none(data))


def _drop_none(data):
    return {k: _drop_none(v) if isinstance(v, dict) else v for k, v in data.items() if v is not None}


@dataclass
class SweepSpec:
    """One swept parameter over explicit values or a linear/log grid."""

    path: str
    values: list[float] | None = None
    start: float | None = None
    stop: float | None = None
    count: int | None = None
    scale: str = "linear"
    base: ExperimentConfig = field(default_factory=ExperimentConfig)

    def points(self) -> list:
        if self.values is not None:
            vals = list(self.values)
        else:
            if None in (self.start, self.stop, self.count) or self.count < 1:
                raise ConfigError("sweep needs either values or start, stop and count >= 1")
            if self.scale == "log":
                vals = np.geomspace(self.start, self.stop, self.count).tolist()
            elif self.scale == "linear":
                vals = np.linspace(self.start, self.stop, self.count).tolist()
            else:
                raise ConfigError(f"sweep scale must be linear or log, got {self.scale!r}")
        get_path(self.base, self.path)
        return vals

    def configs(self) -> list[ExperimentConfig]:
        out = []
        for v in self.points():
            try:
                out.append(with_value(self.base, self.path, v))
            except ConfigError as exc:
                raise ConfigError(f"sweep point {self.path}={v}: {exc}") from None
        return out


def parse_sweep(text: str, base: ExperimentConfig | None = None) -> SweepSpec:
    """Sweep file: ``path = "..."`` plus ``values = [...]`` or ``start/stop/count/scale``."""
    data = tomllib.loads(text)
    allowed = {"path", "values", "start", "stop", "count", "scale"}
    for key in data:
        if key not in allowed:
            raise ConfigError(f"unknown sweep key {key}")
    if "path" not in data:
        raise ConfigError("sweep: missing required field path")
    return SweepSpec(base=copy.deepcopy(base) if base else ExperimentConfig(), **data)
