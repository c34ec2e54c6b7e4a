import pytest

from ddbar.core.exceptions import ScalarDivisionError, ScalarSyntaxError
from ddbar.models.scalars import FieldTag, Scalar, parse_scalar


def random_scalar(rng) -> Scalar:
    re = Scalar.rational(rng.randint(-9, 9), rng.randint(1, 5))
    im = Scalar.rational(rng.randint(-9, 9), rng.randint(1, 5))
    lam = Scalar.lam() * rng.randint(-2, 2)
    return re + im * Scalar.i() + lam


def test_rational_addition():
    assert parse_scalar("1/2") + parse_scalar("1/3") == Scalar.rational(5, 6)
    assert (parse_scalar("1/2") + parse_scalar("1/3")).to_text() == "5/6"


def test_i_squared_is_minus_one():
    assert Scalar.i() * Scalar.i() == Scalar(-1)
    assert parse_scalar("i^2").to_text() == "-1"


def test_lambda_fraction_cancels():
    value = parse_scalar("(lambda - 1)/(lambda^2 - 1)")
    assert value == parse_scalar("1/(lambda + 1)")
    assert value * (Scalar.lam() + 1) == Scalar.one()


def test_conjugate():
    assert parse_scalar("3 + 2*i").conjugate() == parse_scalar("3 - 2*i")
    assert Scalar.lam().conjugate() == Scalar.lam()


def test_conjugate_is_an_involution(rng):
    for _ in range(50):
        s = random_scalar(rng)
        assert s.conjugate().conjugate() == s


def test_subfield_membership():
    assert Scalar.lam().is_in_subfield(FieldTag.Q) == (False, None)
    found, witness = Scalar(7).is_in_subfield(FieldTag.Q)
    assert found and witness == Scalar(7)
    found, witness = parse_scalar("(lambda^2 - lambda^2 + 5)/1").is_in_subfield(FieldTag.Q)
    assert found and witness.to_text() == "5"


def test_minimal_tags():
    assert parse_scalar("2/3").minimal_tag() == FieldTag.Q
    assert parse_scalar("1 + i").minimal_tag() == FieldTag.QI
    assert parse_scalar("lambda/2").minimal_tag() == FieldTag.QLAMBDA
    assert parse_scalar("i*lambda").minimal_tag() == FieldTag.QILAMBDA
    assert FieldTag.QILAMBDA.contains(FieldTag.QI)
    assert not FieldTag.QI.contains(FieldTag.QLAMBDA)


def test_zero_is_canonical():
    zero = parse_scalar("lambda - lambda + i - i")
    assert not zero
    assert zero == Scalar.zero()
    assert zero.to_text() == "0"
    assert hash(zero) == hash(Scalar.zero())


def test_canonical_text():
    assert parse_scalar("2*i").to_text() == "2*i"
    assert parse_scalar("-i").to_text() == "-i"
    assert parse_scalar("1/2 - 3/4*i").to_text() == "1/2 - 3/4*i"
    assert parse_scalar("4/6").to_text() == "2/3"


def test_negative_exponent_and_inverse():
    assert parse_scalar("2^-2") == Scalar.rational(1, 4)
    assert parse_scalar("(1 + i)^-1") == parse_scalar("1/2 - 1/2*i")


def test_division_by_zero_is_its_own_error():
    with pytest.raises(ScalarDivisionError):
        parse_scalar("1/(lambda - lambda)")
    with pytest.raises(ScalarDivisionError):
        Scalar.zero().inverse()


def test_syntax_error_is_located():
    with pytest.raises(ScalarSyntaxError) as info:
        parse_scalar("1 + * 2")
    assert info.value.line == 1
    assert info.value.column == 5


def test_generator_names_are_rejected_in_scalars():
    with pytest.raises(ScalarSyntaxError):
        parse_scalar("x + 1")


def test_field_arithmetic_identities(rng):
    for _ in range(30):
        a, b = random_scalar(rng), random_scalar(rng)
        assert (a + b) - b == a
        if b:
            assert (a / b) * b == a
        assert (a * b).conjugate() == a.conjugate() * b.conjugate()
