"""Define the schemas of region reports and corpus manifests."""

from typing import Any, Dict

import jsonschema

# Scalars are serialized with float.hex, "inf" standing for overflowed bounds
_HEX_SCALAR = {
    "type": "string",
    "pattern": "^(-?0x[0-9a-f]+(\\.[0-9a-f]*)?p[+-]?[0-9]+|inf)$",
}

_VERTEX_BOX = {
    "description": "Round-up bounds of (-r, -s, -d, r, s, d)",
    "type": ["object", "null"],
    "additionalProperties": False,
    "required": ["Ur", "Us", "Ud", "Or", "Os", "Od"],
    "properties": {
        name: _HEX_SCALAR for name in ("Ur", "Us", "Ud", "Or", "Os", "Od")
    },
}

_KIND = {"type": "string", "enum": ["empty", "point", "segment", "polygon"]}

REPORT_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "required": ["Kind", "Precision", "Edges", "Counters"],
    "properties": {
        "Kind": _KIND,
        "Precision": {"type": "integer", "enum": [32, 64]},
        "Edges": {
            "description": "Stored constraints, counter-clockwise",
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["Octant", "N", "C", "VertexBox"],
                "properties": {
                    "Octant": {"type": "integer", "minimum": 0, "maximum": 7},
                    "N": _HEX_SCALAR,
                    "C": _HEX_SCALAR,
                    "VertexBox": _VERTEX_BOX,
                },
            },
        },
        "Counters": {
            "type": "object",
            "additionalProperties": {"type": "integer", "minimum": 0},
        },
    },
}

MANIFEST_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "required": ["Precision", "Seed", "Beta", "Cases"],
    "properties": {
        "Precision": {"type": "integer", "enum": [32, 64]},
        "Seed": {"type": "integer"},
        "Beta": {"type": "integer", "minimum": 1},
        "NormalSet": {"type": "integer", "enum": [32, 64]},
        "Cases": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["Name", "Kind", "ConstraintFile", "Vertices"],
                "properties": {
                    "Name": {"type": "string", "minLength": 1},
                    "Kind": _KIND,
                    "ConstraintFile": {"type": "string", "minLength": 1},
                    "ProbeFile": {"type": "string", "minLength": 1},
                    "Orders": {
                        "description": "Insertion orders of the constraints",
                        "type": "array",
                        "items": {
                            "type": "array",
                            "items": {"type": "integer", "minimum": 0},
                        },
                    },
                    "Vertices": {
                        "description": "Exact integer vertices, counter-clockwise",
                        "type": "array",
                        "items": {
                            "type": "array",
                            "items": {"type": "integer"},
                            "minItems": 2,
                            "maxItems": 2,
                        },
                    },
                },
            },
        },
    },
}


def validate_report(content: Dict) -> None:
    """Validate a region report.

    Raise:
        ValidationError: If the content does not match the schema.
    """
    jsonschema.validate(instance=content, schema=REPORT_SCHEMA)


def validate_manifest(content: Dict) -> None:
    """Validate a corpus manifest.

    Raise:
        ValidationError: If the content does not match the schema.
    """
    jsonschema.validate(instance=content, schema=MANIFEST_SCHEMA)
