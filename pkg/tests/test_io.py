import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from freeset.drawing import EdgeItem, VertexItem
from freeset.errors import IOFailure, SchemaError
from freeset.harness import FIXTURE_NAMES, fixture
from freeset.io import GraphDocument, format_number, parse_document, parse_number, read_document


def test_number_formatting():
    assert format_number(3) == "3"
    assert format_number(Fraction(1, 2)) == "0.5"
    assert format_number(Fraction(1, 3)) == "1/3"
    assert format_number(0.1) == "0.1"
    # exact decimal that no float can hold
    assert format_number(Fraction(1, 10 ** 30)) == "0." + "0" * 29 + "1"


def test_number_parsing():
    assert parse_number("1/3") == Fraction(1, 3)
    assert parse_number(" 2.5 ") == Fraction(5, 2)
    assert parse_number(7) == 7
    assert parse_number(0.5) == Fraction(1, 2)
    for bad in ("x", "1/0", None, True, [1]):
        with pytest.raises(SchemaError):
            parse_number(bad)


@given(st.fractions())
def test_parse_inverts_format_for_rationals(q):
    assert parse_number(format_number(q)) == q


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_parse_inverts_format_for_floats(x):
    assert float(parse_number(format_number(x))) == x


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_document_round_trip_is_lossless(name):
    doc = fixture(name).document()
    text = doc.dumps()
    again = parse_document(text)
    assert again.dumps() == text
    assert again.vertices == doc.vertices
    assert again.targets == doc.targets


def test_document_without_rotation_uses_coordinates():
    obj = {"vertices": [{"id": "a", "x": "0", "y": "0"}, {"id": "b", "x": "1", "y": "0"},
                        {"id": "c", "x": "0", "y": "1"}],
           "edges": [{"u": "a", "v": "b"}, {"u": "b", "v": "c"}, {"u": "c", "v": "a"}]}
    doc = parse_document(obj)
    emb = doc.embedding()
    assert emb.n() == 3 and emb.m() == 3 and len(emb.faces()) == 2


def test_targets_reference_items():
    doc = parse_document(fixture("H5").document().dumps())
    items = [it for it, _ in doc.targets]
    assert items[0] == VertexItem("v") and isinstance(items[1], EdgeItem)


def _base():
    return {"vertices": [{"id": 0, "x": 0, "y": 0}, {"id": 1, "x": 1, "y": 0}], "edges": [{"u": 0, "v": 1}]}


@pytest.mark.parametrize("patch", [
    {"surprise": 1},
    {"format_version": 2},
    {"vertices": [{"id": 0, "x": 0}, {"id": 1, "x": 1, "y": 0}]},
    {"vertices": [{"id": 0, "x": 0, "y": 0}, {"id": "1", "x": 1, "y": 0}]},
    {"edges": [{"u": 0, "v": 0}]},
    {"edges": [{"u": 0, "v": 1}, {"u": 1, "v": 0}]},
    {"edges": [{"u": 0, "v": 5}]},
    {"collinear_set": [9]},
    {"targets": [{"item": {"edge": "nope"}, "y": 0}]},
    {"options": {"arithmetic": "decimal"}},
    {"options": {"tolerances": {"rtol": "small"}}},
    {"rotation": [{"vertex": 0, "ccw": []}, {"vertex": 1, "ccw": ["e0"]}]},
    {"points": [[1, 2, 3]]},
])
def test_schema_errors(patch):
    with pytest.raises(SchemaError):
        parse_document({**_base(), **patch})


def test_invalid_json_text():
    with pytest.raises(SchemaError):
        parse_document("{not json")


def test_rotation_contradicting_coordinates():
    doc = fixture("H5").document()
    obj = json.loads(doc.dumps())
    obj.pop("outer_face")
    r = obj["rotation"][0]
    assert len(r["ccw"]) >= 3
    r["ccw"] = r["ccw"][::-1]
    with pytest.raises(SchemaError):
        parse_document(obj).embedding()


def test_missing_file(tmp_path):
    with pytest.raises(IOFailure):
        read_document(tmp_path / "absent.json")


def test_points_and_meta_survive():
    doc = GraphDocument.from_drawing(fixture("HEX-1").drawing, ("s", "t"), meta={"k": 1},
                                     points=[(Fraction(1, 3), 2)])
    again = parse_document(doc.dumps())
    assert again.extra["points"] == [(Fraction(1, 3), 2)]
    assert again.extra["meta"] == {"k": 1}
