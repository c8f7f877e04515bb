# tests/test_json_utils.py

import json
import numpy as np
import pytest
from zermelo.errors import ValidationError
from zermelo.models.catalog import get_example
from zermelo.utils.json_utils import (
    SPEC_SCHEMA,
    get_json_string,
    load_matrix_file,
    load_spec_file,
    parse_spec,
    spec_to_dict,
    to_plain,
    validate_schema,
)


def _document(**overrides):
    document = {
        "model": {"kind": "sphere", "K": 2.0, "n": 3},
        "wind": {"sigma": 0.0, "Q": [[0, 0, 0], [0, 0, 1], [0, -1, 0]], "C": [-1, 0, 0]},
    }
    document.update(overrides)
    return document


def test_schema_is_valid():
    validate_schema(SPEC_SCHEMA)
    with pytest.raises(ValueError, match="Invalid schema"):
        validate_schema({"type": 5})


def test_parse_spec():
    parsed = parse_spec(_document(expect={"K": 2.0}, sample={"radius": 0.4}))
    assert parsed.spec.model.kind == "sphere"
    assert parsed.spec.model.curvature == 2.0
    np.testing.assert_array_equal(parsed.spec.C, [-1.0, 0.0, 0.0])
    assert parsed.expect == {"K": 2.0}
    assert parsed.sample == {"radius": 0.4}


def test_parse_spec_reports_field_paths():
    document = _document()
    document["wind"]["Q"][1][0] = "zero"
    with pytest.raises(ValidationError, match=r"wind\.Q\[1\]\[0\]"):
        parse_spec(document)
    with pytest.raises(ValidationError, match="wind"):
        parse_spec({"model": {"kind": "sphere", "K": 1.0, "n": 3}})
    with pytest.raises(ValidationError, match="model.kind"):
        parse_spec(_document(model={"kind": "torus", "K": 1.0, "n": 3}))
    with pytest.raises(ValidationError, match="extra"):
        parse_spec(_document(extra=1))
    with pytest.raises(ValidationError, match="sample.radius"):
        parse_spec(_document(sample={"radius": 0}))


def test_parse_spec_checks_shapes_and_semantics():
    with pytest.raises(ValidationError, match=r"wind\.Q"):
        parse_spec(_document(wind={"sigma": 0.0, "Q": [[0, 1], [-1, 0]], "C": [0, 0, 0]}))
    with pytest.raises(ValidationError, match=r"wind\.C"):
        parse_spec(_document(wind={"sigma": 0.0, "Q": [[0] * 3] * 3, "C": [0, 0]}))
    with pytest.raises(ValidationError, match="^wind:"):
        parse_spec(_document(wind={"sigma": 0.0, "Q": [[0, 1, 0], [1, 0, 0], [0, 0, 0]], "C": [0, 0, 0]}))
    with pytest.raises(ValidationError, match="^model:"):
        parse_spec(_document(model={"kind": "sphere", "K": -1.0, "n": 3}))
    with pytest.raises(ValidationError, match="sample.center"):
        parse_spec(_document(sample={"center": [0.0, 0.0]}))


def test_spec_to_dict_is_parseable():
    spec = get_example("3.3.3").build()
    data = spec_to_dict(spec, expect={"K": -1.0}, sample={"radius": 0.2}, example_id="3.3.3")
    assert data["id"] == "3.3.3"
    assert data["model"] == {"kind": "klein", "K": -1.0, "n": 3}
    parsed = parse_spec(data)
    np.testing.assert_array_equal(parsed.spec.Q, spec.Q)
    np.testing.assert_array_equal(parsed.spec.C, spec.C)


def test_spec_to_dict_keeps_hemisphere():
    parsed = parse_spec(_document(model={"kind": "sphere", "K": 1.0, "n": 3, "hemisphere": -1}))
    assert spec_to_dict(parsed.spec)["model"]["hemisphere"] == -1


def test_load_spec_file(tmp_path):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(_document()), encoding="utf-8")
    assert load_spec_file(str(path)).spec.dim == 3


def test_load_spec_file_reports_line_of_bad_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "model":\n}\n', encoding="utf-8")
    with pytest.raises(ValidationError, match="line 3"):
        load_spec_file(str(path))


def test_load_matrix_file(tmp_path):
    bare = tmp_path / "bare.json"
    bare.write_text("[[0, 1], [-1, 0]]", encoding="utf-8")
    wrapped = tmp_path / "wrapped.json"
    wrapped.write_text('{"matrix": [[0, 1], [-1, 0]]}', encoding="utf-8")
    ragged = tmp_path / "ragged.json"
    ragged.write_text("[[0, 1, 2], [-1, 0, 3]]", encoding="utf-8")
    np.testing.assert_array_equal(load_matrix_file(str(bare)), [[0.0, 1.0], [-1.0, 0.0]])
    np.testing.assert_array_equal(load_matrix_file(str(wrapped)), [[0.0, 1.0], [-1.0, 0.0]])
    with pytest.raises(ValidationError, match="square"):
        load_matrix_file(str(ragged))


def test_to_plain():
    plain = to_plain({"a": np.array([1.5, np.nan]), "n": np.int64(3), "ok": np.bool_(True), 4: (np.float32(0.5),)})
    assert plain == {"a": [1.5, None], "n": 3, "ok": True, "4": [0.5]}
    assert type(plain["n"]) is int
    assert type(plain["ok"]) is bool


def test_get_json_string_keeps_full_precision():
    text = get_json_string({"pi": np.float64(np.pi), "third": 1.0 / 3.0})
    data = json.loads(text)
    assert data["pi"] == np.pi
    assert data["third"] == 1.0 / 3.0
    assert "\n  " in text
