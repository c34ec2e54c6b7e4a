import json

import pytest

from ddbar.core.exceptions import (
    AlgebraValidationError,
    FieldMismatchError,
    InvalidBicomplexError,
    ParseError,
    SchemaValidationError,
)
from ddbar.models.algebra import GradedAlgebra
from ddbar.models.bicomplex import Bicomplex, BicomplexMap
from ddbar.models.cartan import TCbba
from ddbar.models.fan import Fan
from ddbar.models.scalars import FieldTag, Scalar
from ddbar.services.parser_service import ParserService
from tests.conftest import FIXTURES

ROUND_TRIP = [
    "bicomplexes/square.json",
    "bicomplexes/square_to_dot.json",
    "algebras/flag.json",
    "algebras/flag_c.json",
    "fans/cp2.json",
    "tcbba/square.json",
]


@pytest.mark.parametrize("name", ROUND_TRIP)
def test_serialization_is_stable(parser, name):
    text = parser.serialize(parser.load(FIXTURES / name))
    assert parser.serialize(parser.loads(text)) == text
    assert json.loads(text)["kind"]


def test_document_kinds(parser):
    assert isinstance(parser.load(FIXTURES / "bicomplexes" / "square.json"), Bicomplex)
    assert isinstance(parser.load(FIXTURES / "bicomplexes" / "square_to_dot.json"), BicomplexMap)
    assert isinstance(parser.load(FIXTURES / "algebras" / "s2.json"), GradedAlgebra)
    assert isinstance(parser.load(FIXTURES / "tcbba" / "orbit.json"), TCbba)


def test_square_matrices(parser):
    square = parser.load(FIXTURES / "bicomplexes" / "square.json")
    assert square.has_real_structure
    assert square.delbar_at((1, 0)).entry(0, 0) == Scalar(-1)
    assert square.sigma_at((1, 1)).entry(0, 0) == Scalar(-1)


def test_fan_cones_become_zero_based(parser):
    fan = parser.load(FIXTURES / "fans" / "cp2.json")
    assert isinstance(fan, Fan)
    assert fan.m == 3
    assert frozenset({0, 2}) in fan.cones


def test_malformed_json_is_located(parser):
    with pytest.raises(ParseError) as info:
        parser.loads('{"kind": "fan",\n  "rank": }')
    assert info.value.line == 2


def test_schema_errors_carry_the_field_path(parser):
    with pytest.raises(SchemaValidationError) as info:
        parser.loads('{"kind": "fan", "rank": 2, "cones": [[1, 2]]}')
    assert info.value.detail["path"] == "rays"

    with pytest.raises(SchemaValidationError) as info:
        parser.from_data({"kind": "manifold"})
    assert info.value.exit_code == 2


def test_expression_errors_carry_the_document_path(parser):
    document = {
        "kind": "algebra",
        "bigraded": False,
        "truncation": 6,
        "generators": [{"name": "x", "degree": 2}, {"name": "y", "degree": 3, "d": "x^"}],
    }
    with pytest.raises(ParseError) as info:
        parser.from_data(document)
    assert info.value.detail["path"] == "generators.1.d"
    assert info.value.message.startswith("generators.1.d: ")


def test_bad_square_names_the_generator(parser):
    with pytest.raises(AlgebraValidationError) as info:
        parser.load(FIXTURES / "algebras" / "bad_square.json")
    assert info.value.witness == "c"


def test_invalid_bicomplex_is_rejected(parser):
    document = {
        "kind": "bicomplex",
        "dims": [{"bidegree": [0, 0], "dim": 1}, {"bidegree": [1, 0], "dim": 1}, {"bidegree": [2, 0], "dim": 1}],
        "del": [
            {"bidegree": [0, 0], "row": 0, "col": 0, "value": "1"},
            {"bidegree": [1, 0], "row": 0, "col": 0, "value": "1"},
        ],
    }
    with pytest.raises(InvalidBicomplexError):
        parser.from_data(document)


def test_field_restriction():
    strict = ParserService(field=FieldTag.Q)
    strict.load(FIXTURES / "algebras" / "flag.json")
    with pytest.raises(FieldMismatchError) as info:
        strict.load(FIXTURES / "tcbba" / "square.json")
    assert info.value.detail["field"] == "Q"
