import pytest

from ddbar.core.exceptions import ParseError
from ddbar.models.algebra import Generator, GradedAlgebra
from ddbar.models.scalars import Scalar


@pytest.fixture
def algebra():
    return GradedAlgebra(
        [Generator("x", (1, 1), "x"), Generator("u", (1, 0), "ub"), Generator("ub", (0, 1), "u")],
        bigraded=True,
        truncation=6,
        real_structure=True,
    )


def test_parse_polynomial(algebra):
    element = algebra.parse("(x + 1)^2 - x^2")
    assert element == algebra.parse("2*x + 1")


def test_scalar_division(algebra):
    assert algebra.parse("x/2") * Scalar(2) == algebra.generator("x")


def test_unknown_generator_is_located(algebra):
    with pytest.raises(ParseError) as info:
        algebra.parse("x +\n  yy")
    assert info.value.line == 2
    assert info.value.column == 3
    assert "yy" in info.value.message


def test_reserved_names_are_scalars(algebra):
    expected = algebra.generator("x") * Scalar.i() + algebra.scalar(Scalar.lam())
    assert algebra.parse("i*x + lambda") == expected


def test_negative_power_of_an_element_is_rejected(algebra):
    with pytest.raises(ParseError):
        algebra.parse("x^-1")


def test_unbalanced_parenthesis(algebra):
    with pytest.raises(ParseError) as info:
        algebra.parse("(x + 1")
    assert "')'" in info.value.message
