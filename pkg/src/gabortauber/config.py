"""Experiment configuration: JSON schema validation and object construction."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import jsonschema

from .catalog import signal_from_spec, window_from_spec
from .comparison import ComparisonFunction
from .errors import ConfigurationError
from .model import Lattice, SignalModel, Window
from .quadrature import QuadratureSpec

_NUM = {"type": "number"}
_INT = {"type": "integer"}
_RANGE = {"type": "array", "items": _INT, "minItems": 2, "maxItems": 2}
_SCALE = {"oneOf": [_NUM, {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2}]}

SIGNAL_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["catalog", "sampled", "point_masses"]},
        "name": {"type": "string"},
        "path": {"type": "string"},
        "extension": {"enum": ["zero", "hold"]},
        "masses": {"type": "array", "items": {"type": "array", "items": _NUM,
                                               "minItems": 2, "maxItems": 3}},
        "components": {"type": "array", "items": {"type": "object"}},
        "amplitude": _NUM, "center": _NUM, "width": _NUM, "freq": _NUM,
        "b": _NUM, "nu": _NUM, "value": _NUM,
        "scale": _SCALE, "shift": _NUM, "modulate": _NUM,
    },
    "additionalProperties": False,
}

WINDOW_SCHEMA = {
    "type": "object",
    "properties": {"name": {"type": "string"}, "width": _NUM, "path": {"type": "string"},
                   "scale": _NUM},
    "required": ["name"],
    "additionalProperties": False,
}

LATTICE_SCHEMA = {
    "type": "object",
    "properties": {"alpha": _NUM, "beta": _NUM, "k_range": _RANGE, "n_range": _RANGE},
    "required": ["alpha", "beta", "k_range", "n_range"],
    "additionalProperties": False,
}

COMPARISON_SCHEMA = {
    "type": "object",
    "properties": {"b": _NUM, "L": {"type": "string"}, "regime": {"enum": ["exponential", "polynomial"]},
                   "nu": _NUM, "negative_rate": {"type": ["number", "null"]}},
    "additionalProperties": False,
}

TOLERANCE_SCHEMA = {
    "type": "object",
    "properties": {
        "quadrature": {
            "type": "object",
            "properties": {"panel_width": _NUM, "support_cutoff": {"type": ["number", "null"]},
                           "tail_tol": _NUM, "order": _INT, "max_refinements": _INT,
                           "max_nodes": _INT},
            "additionalProperties": False,
        },
        "dual_tol": _NUM, "node_tol": _NUM, "cauchy_tol": _NUM, "solve_tol": _NUM,
    },
    "additionalProperties": False,
}

OPTIONS_SCHEMA = {
    "type": "object",
    "properties": {
        "probes": _INT, "power_iterations": _INT, "max_iterations": _INT,
        "eval_points": {"type": "array", "items": _NUM, "minItems": 1},
        "eval_range": {"type": "array", "items": [_NUM, _NUM, _INT], "minItems": 3, "maxItems": 3},
        "analysis": {"enum": ["psi", "gamma"]},
        "theorem": {"enum": ["auto", "t41", "t42", "t43"]},
        "tau": _NUM, "b": _NUM,
        "x_schedule": {"type": "array", "items": _NUM, "minItems": 4},
        "x_cap": _NUM,
        "h_schedule": {"type": "array", "items": _NUM, "minItems": 4},
        "n_set": {"type": "array", "items": _INT, "minItems": 1},
        "b_range": {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2},
        "cross_validate": {"type": "boolean"},
        "mode": {"enum": ["exp-pol", "polynomial"]},
        "grid": {"type": "string"},
        "grids": {"type": "array", "minItems": 1, "items": {
            "type": "object", "properties": {"lambda": _NUM, "path": {"type": "string"}},
            "required": ["lambda", "path"], "additionalProperties": False}},
    },
    "additionalProperties": False,
}

SCHEMA = {
    "type": "object",
    "properties": {
        "signal": SIGNAL_SCHEMA,
        "window": WINDOW_SCHEMA,
        "lattice": LATTICE_SCHEMA,
        "comparison": COMPARISON_SCHEMA,
        "tolerances": TOLERANCE_SCHEMA,
        "options": OPTIONS_SCHEMA,
        "output_dir": {"type": "string"},
    },
    "additionalProperties": False,
}


def _where(err: jsonschema.ValidationError) -> str:
    path = ".".join(str(p) for p in err.absolute_path)
    return path or "<top level>"


def validate(raw: Any) -> None:
    validator = jsonschema.Draft7Validator(SCHEMA)
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise ConfigurationError(f"schema error at {_where(e)}: {e.message}")


@dataclass(frozen=True)
class ExperimentConfig:
    raw: dict
    base_dir: Path = field(default=Path("."))

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        path = Path(path)
        try:
            raw = json.loads(path.read_text())
        except FileNotFoundError:
            raise ConfigurationError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from None
        return cls.from_dict(raw, path.parent)

    @classmethod
    def from_dict(cls, raw: dict, base_dir: str | Path = ".") -> "ExperimentConfig":
        validate(raw)
        return cls(raw, Path(base_dir))

    def require(self, *keys: str) -> None:
        missing = [k for k in keys if k not in self.raw]
        if missing:
            raise ConfigurationError(f"schema error: missing required block(s) {', '.join(missing)}")

    @property
    def options(self) -> dict:
        return self.raw.get("options", {})

    @property
    def tolerances(self) -> dict:
        return self.raw.get("tolerances", {})

    def signal(self) -> SignalModel:
        self.require("signal")
        return signal_from_spec(self.raw["signal"], self.base_dir)

    def window(self) -> Window:
        self.require("window")
        return window_from_spec(self.raw["window"], self.base_dir)

    def lattice(self) -> Lattice:
        self.require("lattice")
        d = self.raw["lattice"]
        return Lattice(d["alpha"], d["beta"], tuple(d["k_range"]), tuple(d["n_range"]))

    def comparison(self) -> ComparisonFunction:
        self.require("comparison")
        return ComparisonFunction.from_dict(self.raw["comparison"])

    def quadrature(self) -> QuadratureSpec:
        return QuadratureSpec(**self.tolerances.get("quadrature", {}))

    def path(self, rel: str) -> Path:
        p = Path(rel)
        return p if p.is_absolute() else self.base_dir / p
