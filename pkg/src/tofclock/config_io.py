"""Plain-text experiment configuration: one `key = value` per line,
grouped into sections.  The emitted form round-trips through load_config."""

from __future__ import annotations

import configparser
import io
import math

from .core import (
    ClockSpec,
    ExperimentConfig,
    PhysicalConfig,
    RegionSpec,
    SpatialGrid,
    WavepacketSpec,
)


class ConfigError(ValueError):
    pass


# (section, key) -> (type, required, default)
_SCHEMA: dict[str, dict[str, tuple[type, bool]]] = {
    "run": {
        "mode": (str, True),
        "placement": (str, False),
        "t_final": (float, True),
        "dt": (float, False),
        "kick_period": (float, False),
        "kick_at_zero": (bool, False),
        "neg_momentum_threshold": (float, False),
        "dominance_factor": (float, False),
        "region_mass_tol": (float, False),
        "boundary_mass_tol": (float, False),
        "snapshots": (int, False),
    },
    "physical": {"mass": (float, False), "hbar": (float, False)},
    "clock": {"omega": (float, True), "j": (int, True)},
    "packet": {"sigma": (float, True), "x0": (float, True), "p0": (float, True)},
    "region": {"x_left": (float, True), "x_right": (float, True)},
    "grid": {"x_min": (float, True), "x_max": (float, True),
             "num_points": (int, True)},
}


def _convert(section: str, key: str, raw: str):
    typ, _ = _SCHEMA[section][key]
    try:
        if typ is bool:
            low = raw.strip().lower()
            if low in ("true", "yes", "1"):
                return True
            if low in ("false", "no", "0"):
                return False
            raise ValueError(raw)
        return typ(raw)
    except ValueError:
        raise ConfigError(
            f"[{section}] {key}: cannot parse {raw!r} as {typ.__name__}"
        ) from None


def parse_config_text(text: str, source: str = "<string>") -> ExperimentConfig:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"parse error: {exc}") from exc

    values: dict[str, dict[str, object]] = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        values[section] = {}
        for key, raw in parser.items(section):
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")
            values[section][key] = _convert(section, key, raw)

    for section, keys in _SCHEMA.items():
        for key, (_typ, required) in keys.items():
            if required and key not in values.get(section, {}):
                raise ConfigError(f"missing mandatory key [{section}] {key}")

    run = values.get("run", {})
    phys = values.get("physical", {})
    kwargs = dict(
        physical=PhysicalConfig(
            m=phys.get("mass", 1.0), hbar=phys.get("hbar", 1.0)
        ),
        region=RegionSpec(values["region"]["x_left"], values["region"]["x_right"]),
        clock=ClockSpec(values["clock"]["omega"], values["clock"]["j"]),
        packet=WavepacketSpec(
            values["packet"]["sigma"], values["packet"]["x0"],
            values["packet"]["p0"],
        ),
        grid=SpatialGrid(
            values["grid"]["x_min"], values["grid"]["x_max"],
            values["grid"]["num_points"],
        ),
        mode=run["mode"],
        t_final=run["t_final"],
    )
    for key in ("placement", "dt", "kick_period", "kick_at_zero",
                "neg_momentum_threshold", "dominance_factor",
                "region_mass_tol", "boundary_mass_tol", "snapshots"):
        if key in run:
            kwargs[key] = run[key]
    try:
        return ExperimentConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"invalid configuration: {exc}") from exc


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text, source=str(path))


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def emit_config(config: ExperimentConfig) -> str:
    """Serialize a config so that load_config reproduces it exactly."""
    out = io.StringIO()

    def section(name, pairs):
        out.write(f"[{name}]\n")
        for key, value in pairs:
            if value is None:
                continue
            out.write(f"{key} = {_fmt(value)}\n")
        out.write("\n")

    section("run", [
        ("mode", config.mode),
        ("placement", config.placement),
        ("t_final", config.t_final),
        ("dt", config.dt),
        ("kick_period", config.kick_period),
        ("kick_at_zero", config.kick_at_zero),
        ("neg_momentum_threshold", config.neg_momentum_threshold),
        ("dominance_factor", config.dominance_factor),
        ("region_mass_tol", config.region_mass_tol),
        ("boundary_mass_tol", config.boundary_mass_tol),
        ("snapshots", config.snapshots),
    ])
    section("physical", [
        ("mass", config.physical.m), ("hbar", config.physical.hbar),
    ])
    section("clock", [
        ("omega", config.clock.omega), ("j", config.clock.j),
    ])
    section("packet", [
        ("sigma", config.packet.sigma), ("x0", config.packet.x0),
        ("p0", config.packet.p0),
    ])
    section("region", [
        ("x_left", config.region.x_left), ("x_right", config.region.x_right),
    ])
    section("grid", [
        ("x_min", config.grid.x_min), ("x_max", config.grid.x_max),
        ("num_points", config.grid.num_points),
    ])
    return out.getvalue()
