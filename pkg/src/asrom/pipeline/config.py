"""Study configuration: one JSON document, schema-validated, fail-fast.

Unknown keys are rejected at every level.  Missing keys fall back to the
documented defaults, so a minimal config can be `{}`.
"""

import copy
import hashlib
import json
from dataclasses import dataclass, field

import numpy as np
from jsonschema import Draft202012Validator

from ..errors import ConfigError
from ..fem import PhysicsConfig
from ..geometry import MorphConfig

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "geometry": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "inlet_length": {"type": "number", "exclusiveMinimum": 0},
                "branch_length": {"type": "number", "exclusiveMinimum": 0},
                "channel_width": {"type": "number", "exclusiveMinimum": 0},
                "branch_angle_deg": {"type": "number"},
                "resolution": {"type": "integer", "minimum": 4},
            },
        },
        "morph": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "radius": {"type": "number", "exclusiveMinimum": 0},
                "n_movable": {"type": "integer", "minimum": 2},
                "box_low": {"type": "number"},
                "box_high": {"type": "number"},
            },
        },
        "physics": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "viscosity": {"type": "number", "exclusiveMinimum": 0},
                "inlet_peak": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "active_subspace": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "n_train": {"type": "integer", "minimum": 1},
                "n_neighbors": {"type": "integer", "minimum": 2},
                "n_bootstrap": {"type": "integer", "minimum": 100},
                "dimension": {
                    "anyOf": [
                        {"const": "auto"},
                        {"type": "integer", "minimum": 1},
                    ]
                },
                "surface_max_dim": {"type": "integer", "minimum": 1},
                "surface_max_order": {"type": "integer", "minimum": 1},
                "surface_test_size": {"type": "integer", "minimum": 1},
            },
        },
        "rom": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "n_train_full": {"type": "integer", "minimum": 2},
                "n_train_active": {"type": "integer", "minimum": 2},
                "n_test": {"type": "integer", "minimum": 1},
                "mode_sweep": {
                    "type": "array",
                    "items": {"type": "integer", "minimum": 1},
                    "minItems": 1,
                },
            },
        },
        "seeds": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "as_train": {"type": "integer"},
                "surface_test": {"type": "integer"},
                "rom_full": {"type": "integer"},
                "rom_active": {"type": "integer"},
                "test": {"type": "integer"},
                "bootstrap": {"type": "integer"},
            },
        },
        "n_jobs": {"type": "integer", "minimum": 1},
        "output_dir": {"type": "string"},
    },
}

DEFAULTS = {
    "geometry": {
        "inlet_length": 4.0,
        "branch_length": 6.0,
        "channel_width": 2.0,
        "branch_angle_deg": 30.0,
        "resolution": 8,
    },
    "morph": {"radius": 2.0, "n_movable": 10, "box_low": 0.0, "box_high": 0.3},
    "physics": {"viscosity": 0.02, "inlet_peak": 1.0},
    "active_subspace": {
        "n_train": 250,
        "n_neighbors": 17,
        "n_bootstrap": 500,
        "dimension": "auto",
        "surface_max_dim": 4,
        "surface_max_order": 4,
        "surface_test_size": 100,
    },
    "rom": {
        "n_train_full": None,  # defaults to active_subspace.n_train
        "n_train_active": 100,
        "n_test": 100,
        "mode_sweep": [2, 5, 10, 15, 20],
    },
    "seeds": {
        "as_train": 2025,
        "surface_test": 2026,
        "rom_full": 2027,
        "rom_active": 2028,
        "test": 2029,
        "bootstrap": 2030,
    },
    "n_jobs": 1,
    "output_dir": "out",
}


@dataclass
class StudyConfig:
    raw: dict
    geometry: dict
    morph_cfg: MorphConfig
    n_movable: int
    physics: PhysicsConfig
    active_subspace: dict
    rom: dict
    seeds: dict
    n_jobs: int
    output_dir: str
    config_hash: str = field(default="")

    @property
    def box_low(self):
        return self.morph_cfg.box_low

    @property
    def box_high(self):
        return self.morph_cfg.box_high


def _merge_defaults(doc):
    merged = copy.deepcopy(DEFAULTS)
    for section, values in doc.items():
        if isinstance(values, dict):
            merged[section].update(values)
        else:
            merged[section] = values
    if merged["rom"]["n_train_full"] is None:
        merged["rom"]["n_train_full"] = merged["active_subspace"]["n_train"]
    return merged


def load_config(source):
    """Build a StudyConfig from a JSON file path, JSON string, or dict."""
    if isinstance(source, dict):
        doc = source
    else:
        text = source
        if not str(source).lstrip().startswith("{"):
            with open(source) as fh:
                text = fh.read()
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}")

    validator = Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
    if errors:
        msgs = "; ".join(
            f"{'/'.join(str(p) for p in e.path) or '<root>'}: {e.message}"
            for e in errors
        )
        raise ConfigError(f"invalid config: {msgs}")

    merged = _merge_defaults(doc)
    geo = merged["geometry"]
    m = merged["morph"]["n_movable"]
    if m % 2 != 0:
        raise ConfigError("morph.n_movable must be even")
    morph_cfg = MorphConfig(
        merged["morph"]["radius"],
        np.full(m, merged["morph"]["box_low"]),
        np.full(m, merged["morph"]["box_high"]),
    )
    physics = PhysicsConfig(
        viscosity=merged["physics"]["viscosity"],
        inlet_peak=merged["physics"]["inlet_peak"],
        reference_width=geo["channel_width"],
    )
    canon = json.dumps(merged, sort_keys=True, separators=(",", ":"))
    return StudyConfig(
        raw=merged,
        geometry=geo,
        morph_cfg=morph_cfg,
        n_movable=m,
        physics=physics,
        active_subspace=merged["active_subspace"],
        rom=merged["rom"],
        seeds=merged["seeds"],
        n_jobs=merged["n_jobs"],
        output_dir=merged["output_dir"],
        config_hash=hashlib.sha256(canon.encode()).hexdigest(),
    )
