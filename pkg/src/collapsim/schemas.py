"""Published JSON Schemas for the serialized outputs.

Schema ids: statekit/1 (matrix values), verdict/1 (discrimination
verdicts), trajectory/1 (evolution samples), report/1 (boundary sweeps).
Every numeric field that carries a physical scale is paired with a unit
string.
"""

from __future__ import annotations

_QUANTITY = {
    "type": "object",
    "properties": {
        "value": {"type": ["number", "null"]},
        "unit": {"type": "string"},
    },
    "required": ["value", "unit"],
    "additionalProperties": False,
}

_COMPLEX_MATRIX = {
    "type": "array",
    "items": {
        "type": "array",
        "items": {
            "type": "array",
            "items": {"type": "number"},
            "minItems": 2,
            "maxItems": 2,
        },
    },
}

_BASIS = {"type": "array", "items": {"type": "string"}, "minItems": 1}

STATEKIT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "statekit/1",
    "type": "object",
    "properties": {
        "schema": {"const": "statekit/1"},
        "kind": {"enum": ["density_matrix", "hamiltonian",
                          "collapse_rate_matrix"]},
        "basis": _BASIS,
        "unit": {"type": "string"},
        "elements": _COMPLEX_MATRIX,
        "rates": {"type": "array",
                  "items": {"type": "array", "items": {"type": "number"}}},
    },
    "required": ["schema", "kind", "basis"],
}

VERDICT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "verdict/1",
    "type": "object",
    "properties": {
        "schema": {"const": "verdict/1"},
        "infinite": {"type": "boolean"},
        "tau": _QUANTITY,
        "regime": {"enum": ["classical", "quantum", "marginal"]},
        "reason": {"enum": ["window_closed", "photon_flight_time",
                            "rabi_probe_destroys", "discriminable"]},
        "derivation": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "symbol": {"type": "string"},
                    "value": {"type": "number"},
                    "unit": {"type": "string"},
                },
                "required": ["symbol", "value", "unit"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["schema", "infinite", "tau", "regime", "reason", "derivation"],
    "additionalProperties": False,
}

TRAJECTORY_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "trajectory/1",
    "type": "object",
    "properties": {
        "schema": {"const": "trajectory/1"},
        "basis": _BASIS,
        "pair": {"type": "array", "items": {"type": "string"},
                 "minItems": 2, "maxItems": 2},
        "samples": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "time": _QUANTITY,
                    "rho": _COMPLEX_MATRIX,
                    "visibility": {"type": "number"},
                    "min_eigenvalue": {"type": "number"},
                    "trace_drift": {"type": "number"},
                },
                "required": ["time", "rho", "visibility", "min_eigenvalue"],
            },
        },
    },
    "required": ["schema", "basis", "pair", "samples"],
    "additionalProperties": False,
}

REPORT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "report/1",
    "type": "object",
    "properties": {
        "schema": {"const": "report/1"},
        "scenario": {"enum": ["trapped", "free-flight", "oscillator"]},
        "axis": {"type": "string"},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "value": {"type": "number"},
                    "unit": {"type": "string"},
                    "tau": _QUANTITY,
                    "regime": {"enum": ["classical", "quantum", "marginal"]},
                    "digest": {"type": "string"},
                },
                "required": ["value", "unit", "tau", "regime"],
            },
        },
        "critical_value": {
            "oneOf": [{"type": "null"}, _QUANTITY],
        },
    },
    "required": ["schema", "scenario", "axis", "rows", "critical_value"],
    "additionalProperties": False,
}
