"""Curve-record JSON: strict schema, parsing and rendering."""

from __future__ import annotations

import json

import jsonschema

from .certify import (
    SHA_PROVENANCES,
    TORSION_PROVENANCES,
    UNKNOWN,
    ArithmeticInvariants,
    ExceptionalPrimeEntry,
)
from .errors import ValidationError
from .finite_field import is_prime
from .hyperelliptic import CurveModel, reduce_mod_p

_INT = {"type": "integer"}
_POS = {"type": "integer", "minimum": 1}
_NONNEG = {"type": "integer", "minimum": 0}

RECORD_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["genus", "f_coeffs"],
    "properties": {
        "label": {"type": "string"},
        "genus": {"type": "integer", "minimum": 2},
        "f_coeffs": {"type": "array", "items": _INT, "minItems": 1},
        "h_coeffs": {"type": "array", "items": _INT},
        "invariants": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "rank": _NONNEG,
                "torsion_order": _POS,
                "torsion_provenance": {"enum": list(TORSION_PROVENANCES)},
                "sha_order": {"oneOf": [_POS, {"type": "null"}]},
                "sha_provenance": {"enum": list(SHA_PROVENANCES)},
                "tamagawa": {
                    "type": "object",
                    "propertyNames": {"pattern": "^[1-9][0-9]*$"},
                    "additionalProperties": _POS,
                },
                "exceptional_primes": {
                    "oneOf": [
                        {"type": "null"},
                        {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "additionalProperties": False,
                                "required": ["ell", "torsion_over_division_field"],
                                "properties": {"ell": _POS, "torsion_over_division_field": _POS},
                            },
                        },
                    ]
                },
                "n0_override": {"oneOf": [_NONNEG, {"type": "null"}]},
            },
        },
    },
}

_VALIDATOR = jsonschema.Draft202012Validator(RECORD_SCHEMA)


def _path(parts) -> str:
    return "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in parts)


def parse_record(data: bytes | str) -> tuple[CurveModel, ArithmeticInvariants]:
    """Validate a curve record and build the model and its invariants."""
    try:
        obj = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ValidationError(f"malformed JSON: {exc}") from exc
    errors = sorted(_VALIDATOR.iter_errors(obj), key=lambda e: list(e.absolute_path))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        raise ValidationError(f"{_path(err.absolute_path)}: {err.message}")

    genus = obj["genus"]
    try:
        curve = CurveModel(genus, tuple(obj["f_coeffs"]), tuple(obj.get("h_coeffs", ())), obj.get("label", ""))
    except ValidationError as exc:
        raise ValidationError(f"$ (model): {exc}") from exc

    raw = obj.get("invariants", {})
    tamagawa = {}
    for key, c in raw.get("tamagawa", {}).items():
        v = int(key)
        if not is_prime(v):
            raise ValidationError(f"$.invariants.tamagawa.{key}: {v} is not prime")
        if v > 2 and reduce_mod_p(curve, v).good:
            raise ValidationError(f"$.invariants.tamagawa.{key}: the model has good reduction at {v}")
        tamagawa[v] = c
    exc_raw = raw.get("exceptional_primes")
    exceptional = None
    if exc_raw is not None:
        exceptional = []
        for i, e in enumerate(exc_raw):
            try:
                exceptional.append(ExceptionalPrimeEntry(e["ell"], e["torsion_over_division_field"]))
            except ValidationError as exc:
                raise ValidationError(f"$.invariants.exceptional_primes[{i}]: {exc}") from exc
        exceptional = tuple(exceptional)
    try:
        inv = ArithmeticInvariants(
            rank=raw.get("rank"),
            torsion_order=raw.get("torsion_order"),
            torsion_provenance=raw.get("torsion_provenance", UNKNOWN),
            sha_order=raw.get("sha_order"),
            sha_provenance=raw.get("sha_provenance", UNKNOWN),
            tamagawa=tamagawa,
            exceptional_primes=exceptional,
            n0_override=raw.get("n0_override"),
        )
    except ValidationError as exc:
        raise ValidationError(f"$.invariants: {exc}") from exc
    return curve, inv


def record_to_json(curve: CurveModel, inv: ArithmeticInvariants) -> dict:
    invariants: dict = {
        "torsion_provenance": inv.torsion_provenance,
        "sha_provenance": inv.sha_provenance,
        "tamagawa": {str(v): c for v, c in sorted(inv.tamagawa.items())},
    }
    if inv.rank is not None:
        invariants["rank"] = inv.rank
    if inv.torsion_order is not None:
        invariants["torsion_order"] = inv.torsion_order
    if inv.sha_order is not None:
        invariants["sha_order"] = inv.sha_order
    if inv.exceptional_primes is not None:
        invariants["exceptional_primes"] = [
            {"ell": e.ell, "torsion_over_division_field": e.torsion_over_division_field}
            for e in inv.exceptional_primes
        ]
    if inv.n0_override is not None:
        invariants["n0_override"] = inv.n0_override
    return {
        "label": curve.label,
        "genus": curve.genus,
        "f_coeffs": list(curve.f_coeffs),
        "h_coeffs": list(curve.h_coeffs),
        "invariants": invariants,
    }


def render_record(curve: CurveModel, inv: ArithmeticInvariants) -> str:
    return json.dumps(record_to_json(curve, inv), indent=2, sort_keys=True) + "\n"
