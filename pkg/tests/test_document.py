import json
from pathlib import Path

import pytest

from isometrize.catalog import ex1_3_family
from isometrize.document import Bundle, emit_document, family_document, load_document, parse_document
from isometrize.errors import ParseError, ValidationError

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


@pytest.mark.parametrize("name", ["three_point", "crevasses", "swap", "integer_window"])
def test_round_trip_is_byte_identical(name):
    b = load_document(INSTANCES / f"{name}.json")
    text = emit_document(b)
    assert emit_document(parse_document(text)) == text


def test_three_point_contents():
    b = load_document(INSTANCES / "three_point.json")
    assert b.inst.n == 3 and b.inst.is_discrete()
    dev = b.first("developments")
    assert dev.depth == 2 and frozenset({0, 1}) in dev[1]


def test_values_parse_exactly():
    b = load_document(INSTANCES / "crevasses.json")
    rho = b.first("gauges")
    assert str(rho(0, 1)) == "1/2" and rho(0, 2) == float("inf")
    assert b.first("tunnels").lambda0 == 5


def test_single_point_document():
    b = parse_document('{"points": 1, "basis": [[0]]}')
    assert b.inst.n == 1 and len(b.group) == 1


def test_missing_object_kind():
    b = parse_document('{"points": 1, "basis": [[0]]}')
    with pytest.raises(ValidationError):
        b.first("gauges")


def test_family_document():
    b = parse_document(json.dumps({"horizons": family_document(ex1_3_family())}))
    assert b.family is not None and [h.m for h in b.family] == [4, 5, 6]
    assert b.inst is b.family.last.inst


def test_labels_become_tuples():
    b = parse_document('{"points": [[0, 1], [0, 2]], "basis": [[0], [1]]}')
    assert b.inst.labels == ((0, 1), (0, 2))


@pytest.mark.parametrize("text,line", [
    ('{"points": 2,\n "basis": [[0], [1]]\n "x": 1}', 3),
    ('[1, 2]', 1),
])
def test_parse_errors_carry_lines(text, line):
    with pytest.raises(ParseError) as info:
        parse_document(text)
    assert info.value.witness["line"] == line


def test_unknown_key():
    with pytest.raises(ParseError) as info:
        parse_document('{"points": 2,\n "basis": [[0], [1]],\n "colour": 1}')
    assert info.value.witness == {"line": 3, "field": "colour"}


def test_bad_group_document():
    with pytest.raises(ValidationError) as info:
        load_document(INSTANCES / "bad_group.json")
    assert info.value.code == "VALIDATION_ERROR" and info.value.witness["field"] == "group"


def test_bundle_defaults():
    b = parse_document('{"points": 2, "basis": [[0], [1]]}')
    assert isinstance(b, Bundle) and b.family is None and b.exhaustion is None
