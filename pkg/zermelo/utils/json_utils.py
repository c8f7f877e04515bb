# utils/json_utils.py

"""
Reading and writing the JSON files of the command-line front end.

A spec file describes one wind on one space form:

    {
      "model": {"kind": "sphere", "K": 2.0, "n": 3},
      "wind": {"sigma": 0.0, "Q": [[...], ...], "C": [...]},
      "expect": {"K": 2.0, "a": [1.0, 1.0], "case": "SpherePlus"},   optional
      "sample": {"center": [0, 0, 0], "radius": 0.6}                 optional
    }

Files are validated against ``SPEC_SCHEMA`` (JSON Schema draft 7) before any
array is built, so a malformed file fails with the path of the offending field.
"""

import json
from typing import Any, Dict, Optional
import attrs
import jsonschema
from jsonschema import Draft7Validator
import numpy as np
from zermelo.errors import ValidationError
from zermelo.models.space_form import SpaceFormFactory
from zermelo.models.wind import WindSpec

_NUMBER_ARRAY = {"type": "array", "items": {"type": "number"}}
_MATRIX = {"type": "array", "items": _NUMBER_ARRAY, "minItems": 1}

SPEC_SCHEMA: Dict[str, Any] = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "properties": {
        "id": {"type": "string"},
        "description": {"type": "string"},
        "model": {
            "type": "object",
            "properties": {
                "kind": {"enum": ["sphere", "euclidean", "klein"]},
                "K": {"type": "number"},
                "n": {"type": "integer", "minimum": 2},
                "hemisphere": {"enum": [1, -1]},
            },
            "required": ["kind", "K", "n"],
            "additionalProperties": False,
        },
        "wind": {
            "type": "object",
            "properties": {
                "sigma": {"type": "number"},
                "Q": _MATRIX,
                "C": _NUMBER_ARRAY,
            },
            "required": ["sigma", "Q", "C"],
            "additionalProperties": False,
        },
        "expect": {
            "type": "object",
            "properties": {
                "K": {"type": "number"},
                "a": _NUMBER_ARRAY,
                "case": {"type": "string"},
            },
            "additionalProperties": False,
        },
        "sample": {
            "type": "object",
            "properties": {
                "center": _NUMBER_ARRAY,
                "radius": {"type": "number", "exclusiveMinimum": 0},
            },
            "additionalProperties": False,
        },
    },
    "required": ["model", "wind"],
    "additionalProperties": False,
}

MATRIX_SCHEMA: Dict[str, Any] = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "oneOf": [
        _MATRIX,
        {
            "type": "object",
            "properties": {"matrix": _MATRIX},
            "required": ["matrix"],
        },
    ],
}


@attrs.frozen(eq=False)
class SpecFile:
    """
    A parsed spec file.

    Attributes:
        spec (WindSpec): The wind and its model.
        expect (Optional[Dict]): Optional expectations for verification.
        sample (Optional[Dict]): Optional verification region.
    """

    spec: WindSpec
    expect: Optional[Dict] = None
    sample: Optional[Dict] = None


def validate_schema(schema: Dict[str, Any]) -> None:
    """
    Validates a JSON schema.

    Raises:
        ValueError: If the schema is invalid.
    """
    try:
        Draft7Validator.check_schema(schema)
    except jsonschema.exceptions.SchemaError as e:
        raise ValueError(f"Invalid schema: {e.message}") from e


def _field_path(error: jsonschema.exceptions.ValidationError) -> str:
    path = ""
    for part in error.absolute_path:
        path += f"[{part}]" if isinstance(part, int) else (f".{part}" if path else str(part))
    return path or "<root>"


def validate_document(data: Any, schema: Dict[str, Any]) -> None:
    """
    Validate a parsed JSON document, reporting the first error by field path.

    Raises:
        ValidationError: With the path of the offending field, e.g. ``wind.Q[1][0]``.
    """
    errors = sorted(Draft7Validator(schema).iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        error = errors[0]
        raise ValidationError(f"{_field_path(error)}: {error.message}")


def _loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e


def parse_spec(data: Dict[str, Any]) -> SpecFile:
    """
    Build a SpecFile from a decoded spec document.

    Raises:
        ValidationError: If the document violates the schema or the arrays do not fit the model.
    """
    validate_document(data, SPEC_SCHEMA)
    model_data = data["model"]
    wind_data = data["wind"]
    n = model_data["n"]
    q = wind_data["Q"]
    if len(q) != n or any(len(row) != n for row in q):
        raise ValidationError(f"wind.Q: expected a {n}x{n} matrix")
    if len(wind_data["C"]) != n:
        raise ValidationError(f"wind.C: expected {n} entries, got {len(wind_data['C'])}")
    try:
        model = SpaceFormFactory.create_model(
            model_data["kind"], model_data["K"], n, hemisphere_sign=model_data.get("hemisphere", 1)
        )
    except ValidationError as e:
        raise ValidationError(f"model: {e}") from e
    try:
        spec = WindSpec(model=model, sigma=wind_data["sigma"], Q=q, C=wind_data["C"])
    except ValidationError as e:
        raise ValidationError(f"wind: {e}") from e
    sample = data.get("sample")
    if sample and "center" in sample and len(sample["center"]) != n:
        raise ValidationError(f"sample.center: expected {n} entries")
    return SpecFile(spec=spec, expect=data.get("expect"), sample=sample)


def load_spec_file(path: str) -> SpecFile:
    """
    Read and validate a spec file.

    Args:
        path (str): Path of the JSON file.

    Returns:
        SpecFile: The parsed spec with its optional blocks.

    Raises:
        ValidationError: On malformed JSON (with line and column) or invalid fields (with their path).
    """
    with open(path, "r", encoding="utf-8") as file:
        return parse_spec(_loads(file.read()))


def load_matrix_file(path: str) -> np.ndarray:
    """
    Read a square matrix given either as a bare nested array or as ``{"matrix": [[...]]}``.
    """
    with open(path, "r", encoding="utf-8") as file:
        data = _loads(file.read())
    validate_document(data, MATRIX_SCHEMA)
    rows = data["matrix"] if isinstance(data, dict) else data
    if any(len(row) != len(rows) for row in rows):
        raise ValidationError("matrix must be square")
    return np.array(rows, dtype=float)


def spec_to_dict(
    spec: WindSpec,
    expect: Optional[Dict] = None,
    sample: Optional[Dict] = None,
    example_id: Optional[str] = None,
) -> Dict[str, Any]:
    """
    The spec-file document of a WindSpec; ``parse_spec`` inverts it.
    """
    model = spec.model
    data: Dict[str, Any] = {}
    if example_id is not None:
        data["id"] = example_id
    data["model"] = {"kind": model.kind, "K": model.curvature, "n": model.dim}
    if model.hemisphere_sign != 1:
        data["model"]["hemisphere"] = model.hemisphere_sign
    data["wind"] = {"sigma": spec.sigma, "Q": spec.Q.tolist(), "C": spec.C.tolist()}
    if expect:
        data["expect"] = expect
    if sample:
        data["sample"] = sample
    return to_plain(data)


def to_plain(value: Any) -> Any:
    """
    Convert numpy scalars and arrays (recursively) to Python types; non-finite floats become None.
    """
    if isinstance(value, dict):
        return {str(key): to_plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return to_plain(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if np.isfinite(value) else None
    return value


def get_json_string(data: Any) -> str:
    """
    Convert data to an indented JSON string.

    Floats keep all 17 significant digits: Python prints the shortest decimal
    that reads back to the same double.
    """
    return json.dumps(to_plain(data), indent=2)
