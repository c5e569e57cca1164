"""Run configuration: JSON schema, dataclasses, and line-anchored validation errors.

All lengths in configuration files are in meters and carry an ``_m`` suffix.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import jsonschema
import numpy as np

SCHEMA_VERSION = 1

_num = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}
_range = {
    "type": "object",
    "properties": {"min": _num, "max": _num, "n": {"type": "integer", "minimum": 1}},
    "required": ["min", "max", "n"],
    "additionalProperties": False,
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "command"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"enum": ["simulate", "talbot", "sweep"]},
        "system": {
            "type": "object",
            "properties": {"f1_m": _pos, "f2_m": _pos, "lambda_m": _pos},
            "required": ["f1_m", "f2_m", "lambda_m"],
            "additionalProperties": False,
        },
        "mask": {
            "type": "object",
            "properties": {
                "kind": {"enum": ["bright", "dark", "dual"]},
                "a_m": _pos,
                "d_m": _pos,
                "t_a": {"type": "number", "minimum": 0, "maximum": 1},
                "t_b": {"type": "number", "minimum": 0, "maximum": 1},
                "phi_ab_deg": _num,
                "grid_n": {"type": "integer", "minimum": 1},
                "dual": {
                    "type": "object",
                    "properties": {"a_m": _pos, "t_a": {"type": "number", "minimum": 0, "maximum": 1}},
                    "required": ["a_m", "t_a"],
                    "additionalProperties": False,
                },
            },
            "required": ["kind", "a_m", "d_m"],
            "additionalProperties": False,
        },
        "filter": {
            "type": "object",
            "properties": {
                "kind": {"enum": ["iris", "zone", "none"]},
                "b_units": _pos,
                "n_rings": {"type": "integer", "minimum": 0},
            },
            "required": ["kind"],
            "additionalProperties": False,
        },
        "grid": {
            "type": "object",
            "properties": {"n": {"type": "integer", "minimum": 16}, "samples_per_a": {"type": "number", "minimum": 4}},
            "required": ["n", "samples_per_a"],
            "additionalProperties": False,
        },
        "z_scan": {
            "type": "object",
            "properties": {"z_min_m": _num, "z_max_m": _num, "n": {"type": "integer", "minimum": 2}},
            "required": ["z_min_m", "z_max_m", "n"],
            "additionalProperties": False,
        },
        "depth": {
            "type": "object",
            "properties": {
                "input_intensity_W_m2": _pos,
                "polarizability_uK_per_W_m2": _num,
                "mass_kg": _pos,
            },
            "required": ["input_intensity_W_m2", "polarizability_uK_per_W_m2"],
            "additionalProperties": False,
        },
        "source": {
            "type": "object",
            "properties": {
                "coherent": {"type": "boolean"},
                "incoherent": {
                    "type": "object",
                    "properties": {
                        "fwhm_m": {"type": "number", "minimum": 0},
                        "n_spectral": {"type": "integer", "minimum": 1},
                        "n_modes": {"type": "integer", "minimum": 1},
                        "mode_waist_m": _pos,
                        "draws": {"type": "integer", "minimum": 1},
                        "seed": {"type": "integer", "minimum": 0},
                    },
                    "required": ["fwhm_m", "n_spectral", "n_modes"],
                    "additionalProperties": False,
                },
            },
            "additionalProperties": False,
        },
        "talbot": {
            "type": "object",
            "properties": {"z_min_m": _num, "z_max_m": _num, "n_coarse": {"type": "integer", "minimum": 5}},
            "required": ["z_min_m", "z_max_m"],
            "additionalProperties": False,
        },
        "sweep": {
            "type": "object",
            "properties": {
                "t_a": {"oneOf": [{"type": "number", "minimum": 0, "maximum": 1},
                                  {"type": "array", "items": {"type": "number", "minimum": 0, "maximum": 1}, "minItems": 1}]},
                "t_b": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
                "phi_deg": _range,
                "b_units": _range,
            },
            "required": ["t_a", "phi_deg", "b_units"],
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
    "allOf": [
        {"if": {"properties": {"command": {"const": "simulate"}}},
         "then": {"required": ["system", "mask", "filter", "grid"]}},
        {"if": {"properties": {"command": {"const": "talbot"}}},
         "then": {"required": ["system", "mask", "filter", "grid", "talbot"]}},
        {"if": {"properties": {"command": {"const": "sweep"}}},
         "then": {"required": ["sweep"]}},
    ],
}


class ConfigError(Exception):
    """Invalid configuration; ``str()`` is anchored to a file line where possible."""

    def __init__(self, message: str, path=None, line: int | None = None):
        self.line = line
        where = f"{path}:{line}: " if path is not None and line else (f"{path}: " if path else "")
        super().__init__(where + message)


@dataclass
class SystemConfig:
    f1_m: float
    f2_m: float
    lambda_m: float


@dataclass
class DualConfig:
    a_m: float
    t_a: float


@dataclass
class MaskConfig:
    kind: str
    a_m: float
    d_m: float
    t_a: float = 1.0
    t_b: float = 0.0
    phi_ab_deg: float = 0.0
    grid_n: int = 1
    dual: DualConfig | None = None


@dataclass
class FilterConfig:
    kind: str
    b_units: float = 1.0
    n_rings: int = 0


@dataclass
class GridConfig:
    n: int
    samples_per_a: float


@dataclass
class ZScanConfig:
    z_min_m: float
    z_max_m: float
    n: int


@dataclass
class DepthConfig:
    input_intensity_W_m2: float
    polarizability_uK_per_W_m2: float
    mass_kg: float | None = None


@dataclass
class IncoherentConfig:
    fwhm_m: float
    n_spectral: int
    n_modes: int
    mode_waist_m: float | None = None
    draws: int = 1
    seed: int = 0


@dataclass
class SourceConfig:
    coherent: bool = True
    incoherent: IncoherentConfig | None = None


@dataclass
class TalbotConfig:
    z_min_m: float
    z_max_m: float
    n_coarse: int = 41


@dataclass
class RangeConfig:
    min: float
    max: float
    n: int

    def values(self):
        return np.linspace(self.min, self.max, self.n) if self.n > 1 else np.array([self.min])


@dataclass
class SweepConfig:
    t_a: list
    phi_deg: RangeConfig
    b_units: RangeConfig
    t_b: float = 1.0


@dataclass
class RunConfig:
    schema_version: int
    command: str
    system: SystemConfig | None = None
    mask: MaskConfig | None = None
    filter: FilterConfig | None = None
    grid: GridConfig | None = None
    z_scan: ZScanConfig | None = None
    depth: DepthConfig | None = None
    source: SourceConfig = field(default_factory=SourceConfig)
    talbot: TalbotConfig | None = None
    sweep: SweepConfig | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def _locate(text: str, path) -> int | None:
    """Best-effort line number of the JSON node at ``path``."""
    pos = 0
    found = False
    for key in path:
        if isinstance(key, int):
            continue
        i = text.find(json.dumps(key), pos)
        if i < 0:
            break
        pos, found = i, True
    return text.count("\n", 0, pos) + 1 if found else 1


def _build(data: dict) -> RunConfig:
    def sub(cls, d):
        return None if d is None else cls(**d)

    mask = data.get("mask")
    if mask is not None:
        mask = dict(mask)
        mask["dual"] = sub(DualConfig, mask.get("dual"))
    source = dict(data.get("source", {}))
    source["incoherent"] = sub(IncoherentConfig, source.get("incoherent"))
    sweep = data.get("sweep")
    if sweep is not None:
        sweep = dict(sweep)
        sweep["t_a"] = sweep["t_a"] if isinstance(sweep["t_a"], list) else [sweep["t_a"]]
        sweep["phi_deg"] = RangeConfig(**sweep["phi_deg"])
        sweep["b_units"] = RangeConfig(**sweep["b_units"])
        sweep = SweepConfig(**sweep)
    return RunConfig(
        schema_version=data["schema_version"],
        command=data["command"],
        system=sub(SystemConfig, data.get("system")),
        mask=None if mask is None else MaskConfig(**mask),
        filter=sub(FilterConfig, data.get("filter")),
        grid=sub(GridConfig, data.get("grid")),
        z_scan=sub(ZScanConfig, data.get("z_scan")),
        depth=sub(DepthConfig, data.get("depth")),
        source=SourceConfig(**source),
        talbot=sub(TalbotConfig, data.get("talbot")),
        sweep=sweep,
    )


def _semantic_checks(cfg: RunConfig, text: str, source):
    def fail(msg, *keys):
        return ConfigError(msg, source, _locate(text, keys))

    if cfg.mask is not None:
        if cfg.mask.d_m < 2 * cfg.mask.a_m:
            raise fail("mask pitch d_m must be at least twice a_m", "mask", "d_m")
        if cfg.mask.kind == "dual" and cfg.mask.dual is None:
            raise fail("dual masks need a 'dual' block", "mask", "kind")
    for name in ("z_scan", "talbot"):
        blk = getattr(cfg, name)
        if blk is not None and not blk.z_max_m > blk.z_min_m:
            raise fail("z_max_m must exceed z_min_m", name, "z_max_m")
    if cfg.sweep is not None:
        for ax in ("phi_deg", "b_units"):
            r = getattr(cfg.sweep, ax)
            if r.max < r.min or (r.n > 1 and r.max == r.min):
                raise fail(f"empty {ax} range", "sweep", ax)
        if cfg.sweep.b_units.min <= 0:
            raise fail("b_units must be positive", "sweep", "b_units", "min")


def load_config(path) -> RunConfig:
    """Parse and validate a configuration file, raising :class:`ConfigError`."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", path) from None
    return parse_config(text, path)


def parse_config(text: str, path="<config>") -> RunConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc.msg} (column {exc.colno})", path, exc.lineno) from None
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        err = errors[0]
        loc = "/".join(map(str, err.absolute_path)) or "<root>"
        raise ConfigError(f"{loc}: {err.message}", path, _locate(text, list(err.absolute_path)))
    cfg = _build(data)
    _semantic_checks(cfg, text, path)
    return cfg
