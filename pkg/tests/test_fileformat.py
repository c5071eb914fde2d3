import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadstab.fileformat import (
    KINDS,
    Decoration,
    ParseError,
    dumps,
    format_rational,
    from_dict,
    load,
    loads,
    parse_rational,
    to_dict,
    validate_instance,
)
from quadstab.generators import FAMILIES, GeneratorConfig, stream

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


@pytest.mark.parametrize("text,value", [("3", 3), ("-1/2", Fraction(-1, 2)), (" 4 / 6 ", Fraction(2, 3)), (7, 7)])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", ["1/0", "0.5", 0.5, True, "x", None, "1/-2"])
def test_parse_rational_rejects(bad):
    with pytest.raises(ParseError):
        parse_rational(bad)


@given(st.fractions())
def test_rational_round_trip(x):
    assert parse_rational(format_rational(x)) == x


@pytest.mark.parametrize("path", sorted(INSTANCES.glob("*.json")), ids=lambda p: p.name)
def test_shipped_instances_are_valid(path):
    inst = load(str(path))
    assert inst.kind in KINDS
    assert validate_instance(inst) == []


def test_decoration_parsed():
    inst = load(str(INSTANCES / "catalog_walls.json"))
    assert inst.decorated == Decoration(1, 2, 1)


def test_unknown_key():
    doc = json.loads((INSTANCES / "orthogonal_r2.json").read_text())
    doc["colour"] = "blue"
    with pytest.raises(ParseError, match="unknown keys"):
        from_dict(doc)


def test_missing_key():
    doc = json.loads((INSTANCES / "example_r5.json").read_text())
    del doc["pattern"]
    with pytest.raises(ParseError, match="missing keys"):
        from_dict(doc)


def test_bad_kind_and_json():
    with pytest.raises(ParseError, match="kind"):
        loads('{"kind": "spinor"}')
    with pytest.raises(ParseError, match="invalid JSON"):
        loads("{")
    with pytest.raises(ParseError, match="cannot read"):
        load("/nonexistent/file.json")


def test_integer_fields_reject_booleans():
    doc = json.loads((INSTANCES / "orthogonal_r2.json").read_text())
    doc["elements"][0]["rank"] = True
    with pytest.raises(ParseError, match="integer expected"):
        from_dict(doc)


def test_semantic_problems_reported_not_raised():
    doc = json.loads((INSTANCES / "example_r5.json").read_text())
    doc["pattern"][0][4] = 0
    problems = validate_instance(from_dict(doc))
    assert any("symmetry" in p for p in problems)


@pytest.mark.parametrize("family", FAMILIES)
def test_generated_round_trip(family):
    for inst in stream(GeneratorConfig(seed=3, family=family), 30):
        text = dumps(inst)
        again = loads(text)
        assert to_dict(again) == to_dict(inst)
        assert dumps(again) == text
        assert validate_instance(again) == []
