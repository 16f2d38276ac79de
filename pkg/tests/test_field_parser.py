from fractions import Fraction

import pytest

from utils.field_parser import FieldParseError, FieldParser, parse_field, parse_polynomial
from utils.superpoly import CoordinateSystem, SuperPolynomial, SuperVectorField


SYSTEM = CoordinateSystem(even=("x1", "x2"), odd=("xi1", "xi2"))


def var(name):
    return SuperPolynomial.variable(SYSTEM, name)


def test_juxtaposition_is_ordered_multiplication():
    assert parse_polynomial(SYSTEM, "xi2 xi1") == -(var("xi1") * var("xi2"))
    assert parse_polynomial(SYSTEM, "xi1 * xi2") == var("xi1") * var("xi2")


def test_fractions_and_powers():
    p = parse_polynomial(SYSTEM, "2/3 x1^2 - 1/2 x2 + 4")
    assert p == var("x1") ** 2 * Fraction(2, 3) - var("x2") * Fraction(1, 2) + 4


def test_polynomial_text_reads_back():
    p = var("x1") ** 2 * Fraction(-5, 7) + var("x2") * var("xi1") * var("xi2") - 3
    assert parse_polynomial(SYSTEM, str(p)) == p


def test_field_expression():
    field = parse_field(SYSTEM, "x1 D[x1] - 2 xi1 D[xi2] + D[x2]")
    expected = SuperVectorField(SYSTEM, {
        "x1": var("x1"),
        "xi2": var("xi1").scale(-2),
        "x2": SuperPolynomial.constant(SYSTEM, 1),
    })
    assert field == expected


def test_parenthesised_coefficients():
    field = parse_field(SYSTEM, "(x1 + xi1 xi2) D[x2]")
    assert field.component("x2") == var("x1") + var("xi1") * var("xi2")


def test_field_text_reads_back():
    field = parse_field(SYSTEM, "-xi1 D[x1] + (x2^2 - xi1 xi2) D[xi1]")
    assert parse_field(SYSTEM, str(field)) == field


def test_zero_reads_as_zero_field():
    assert not parse_field(SYSTEM, "0")


@pytest.mark.parametrize("text", [
    "u",
    "D[x1] D[x2]",
    "x1 +",
    "(x1",
    "x1 ^ xi1",
    "x1 $ x2",
    "",
])
def test_malformed_expressions(text):
    with pytest.raises(FieldParseError):
        FieldParser(SYSTEM).parse_field(text)


def test_kinds_are_enforced():
    with pytest.raises(FieldParseError):
        parse_polynomial(SYSTEM, "D[x1]")
    with pytest.raises(FieldParseError):
        parse_field(SYSTEM, "x1 + 1")
    with pytest.raises(FieldParseError):
        parse_field(SYSTEM, "x1 + D[x1]")


def test_unknown_coordinates_are_named():
    with pytest.raises(FieldParseError, match="Unknown coordinate 'xi3'"):
        parse_polynomial(SYSTEM, "x1 xi3")
    with pytest.raises(FieldParseError, match="Unknown coordinate 'u'"):
        parse_field(SYSTEM, "x1 D[u]")


def test_power_of_a_field_is_rejected():
    with pytest.raises(FieldParseError, match="Only polynomials"):
        parse_field(SYSTEM, "D[x1]^2")


def test_odd_square_vanishes():
    assert not parse_polynomial(SYSTEM, "xi1 xi1")
    assert parse_polynomial(SYSTEM, "xi1 (x1 + xi2)") == var("xi1") * var("x1") + var("xi1") * var("xi2")
