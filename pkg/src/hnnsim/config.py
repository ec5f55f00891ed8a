"""Run configuration: JSON file plus ``--section.field value`` overrides."""

from __future__ import annotations

import json
import typing
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .energy import EnergyParams
from .mapping import NocConfig
from .sim import MODES


class ConfigError(ValueError):
    pass


LAYER_OVERRIDES = ("activity", "timesteps", "act_bits")
SWEEP_AXES = ("activity", "act_bits", "grouping", "mesh")

_SECTIONS = {"noc": NocConfig, "energy": EnergyParams}


@dataclass(frozen=True)
class RunConfig:
    noc: NocConfig = field(default_factory=NocConfig)
    energy: EnergyParams = field(default_factory=EnergyParams)
    mode: str = "ann"
    # Applied to every layer of the workload when set.
    layer: dict = field(default_factory=dict)
    sweep: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        unknown = set(self.layer) - set(LAYER_OVERRIDES)
        if unknown:
            raise ConfigError(f"unknown layer override(s): {sorted(unknown)}")
        unknown = set(self.sweep) - set(SWEEP_AXES)
        if unknown:
            raise ConfigError(f"unknown sweep axis/axes: {sorted(unknown)}")
        for axis, values in self.sweep.items():
            if not values:
                raise ConfigError(f"sweep axis {axis!r} is empty")


def field_types(cls) -> dict[str, type]:
    hints = typing.get_type_hints(cls)
    out = {}
    for f in fields(cls):
        t = hints[f.name]
        args = [a for a in typing.get_args(t) if a is not type(None)]
        out[f.name] = args[0] if args else t
    return out


def coerce(value, typ: type, name: str):
    if isinstance(value, str):
        if typ is bool:
            low = value.lower()
            if low in ("1", "true", "on", "yes"):
                return True
            if low in ("0", "false", "off", "no"):
                return False
            raise ConfigError(f"{name}: expected on/off, got {value!r}")
        if value.lower() in ("none", "null", "") and typ is not str:
            return None
    try:
        if typ is int and isinstance(value, float) and not value.is_integer():
            raise ValueError("not an integer")
        return typ(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name}: cannot read {value!r} as {typ.__name__}") from exc


def _build(cls, values: dict, section: str):
    types = field_types(cls)
    unknown = set(values) - set(types)
    if unknown:
        raise ConfigError(f"unknown {section} field(s): {sorted(unknown)}")
    kwargs = {k: coerce(v, types[k], f"{section}.{k}") for k, v in values.items()}
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{section}: {exc}") from exc


def _parse_list(text: str) -> list[str]:
    return [t.strip() for t in str(text).split(",") if t.strip()]


def parse_axis(axis: str, raw) -> list:
    items = raw if isinstance(raw, list) else _parse_list(raw)
    try:
        if axis == "activity":
            return [float(v) for v in items]
        if axis in ("act_bits", "grouping"):
            return [int(v) for v in items]
        out = []
        for v in items:
            if isinstance(v, str):
                w, _, h = v.lower().partition("x")
                v = (int(w), int(h or w))
            out.append((int(v[0]), int(v[1])))
        return out
    except (TypeError, ValueError, IndexError) as exc:
        raise ConfigError(f"bad values for sweep axis {axis!r}: {raw!r}") from exc


def load_config(path: str | Path | None = None, overrides: dict | None = None,
                mode: str | None = None) -> RunConfig:
    """Read ``path`` (JSON) and apply dotted overrides like ``{"noc.mesh_w": "6"}``."""
    doc: dict = {}
    if path is not None:
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError(f"{path}: top level must be an object")
    known = set(_SECTIONS) | {"mode", "layer", "sweep"}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"unknown config section(s): {sorted(unknown)}")

    sections = {name: dict(doc.get(name, {})) for name in (*_SECTIONS, "layer", "sweep")}
    for key, value in (overrides or {}).items():
        section, _, name = key.partition(".")
        if section not in sections or not name:
            raise ConfigError(f"bad override {key!r}")
        sections[section][name] = value

    layer = {}
    for k, v in sections["layer"].items():
        if v is None:
            continue
        layer[k] = coerce(v, float if k == "activity" else int, f"layer.{k}")
    sweep = {axis: parse_axis(axis, raw) for axis, raw in sections["sweep"].items()}
    return RunConfig(
        noc=_build(NocConfig, sections["noc"], "noc"),
        energy=_build(EnergyParams, sections["energy"], "energy"),
        mode=mode or doc.get("mode", "ann"),
        layer=layer,
        sweep=sweep,
    )


def sweep_points(cfg: RunConfig) -> list[dict]:
    """Cartesian product of the configured axes in a fixed, documented order."""
    points: list[dict] = [{}]
    for axis in SWEEP_AXES:
        if axis not in cfg.sweep:
            continue
        points = [{**p, axis: v} for p in points for v in cfg.sweep[axis]]
    return points


def apply_point(cfg: RunConfig, point: dict) -> RunConfig:
    noc = cfg.noc
    layer = dict(cfg.layer)
    if "grouping" in point:
        noc = replace(noc, neurons_per_core=point["grouping"])
    if "mesh" in point:
        noc = replace(noc, mesh_w=point["mesh"][0], mesh_h=point["mesh"][1])
    for k in ("activity", "act_bits"):
        if k in point:
            layer[k] = point[k]
    return replace(cfg, noc=noc, layer=layer)
