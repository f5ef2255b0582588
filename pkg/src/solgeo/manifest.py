"""JSON manifests for the command-line front end."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import jsonschema

from .errors import ValidationError
from .lattice_manifolds import build_monodromy

_VEC3 = {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}
_INT_MATRIX = {
    "type": "array",
    "minItems": 2,
    "maxItems": 2,
    "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
}
_REAL_MATRIX = {
    "type": "array",
    "minItems": 2,
    "maxItems": 2,
    "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
}
_POSITIVE = {"type": "number", "exclusiveMinimum": 0}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "matrix": _INT_MATRIX,
        "kind": {"enum": ["suspension", "sapphire"]},
        "scale": _POSITIVE,
        "cutoff": _POSITIVE,
        "n": {"type": "integer", "minimum": 1},
        "max_period": {"type": "integer", "minimum": 0},
        "types": {"enum": ["A", "B", "AB"]},
        "bucket": _POSITIVE,
        "classes": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
        },
        "state": {
            "type": "object",
            "additionalProperties": False,
            "required": ["position"],
            "properties": {"position": _VEC3, "momentum": _VEC3, "velocity": _VEC3},
        },
        "geodesic": {"enum": ["A", "B"]},
        "normalize": {"type": "boolean"},
        "time": {"type": "number"},
        "samples": {"type": "integer", "minimum": 2},
        "tol": _POSITIVE,
        "length": _POSITIVE,
        "path": {"enum": ["rotation", "hyperbolic", "generated"]},
        "S": _REAL_MATRIX,
        "delta": _POSITIVE,
        "grid": {"type": "integer", "minimum": 2},
        "tree": {"type": "object"},
        "N0": {"type": "integer", "minimum": 1},
    },
}


@dataclass(frozen=True)
class Manifest:
    data: dict
    source: str

    def get(self, key, default=None):
        return self.data.get(key, default)

    def __contains__(self, key):
        return key in self.data


def validate_manifest(data, source: str = "<manifest>") -> Manifest:
    try:
        jsonschema.validate(data, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "(root)"
        raise ValidationError(f"{source}: field {where}: {exc.message}") from exc
    if "matrix" in data:
        build_monodromy(data["matrix"])
    return Manifest(data, source)


def parse_manifest(path) -> Manifest:
    """Read and validate a manifest file; matrices must be hyperbolic in GL2(Z)."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read manifest {p}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{p}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return validate_manifest(data, str(p))
