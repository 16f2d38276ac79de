"""Reader for polynomial and vector-field expressions.

Grammar::

    expr   := ['+' | '-'] term (('+' | '-') term)*
    term   := factor (['*'] factor)*
    factor := atom ['^' INT]
    atom   := INT ['/' INT] | 'D[' NAME ']' | NAME | '(' expr ')'

Names are coordinates of the given system (``x1``, ``xi3``, ``u``); products
are written by juxtaposition and folded left to right, so odd factors keep
the order they are written in. ``D[c]`` is the coordinate derivation, and a
polynomial times a derivation (on the left) is a vector field.
"""

from __future__ import annotations
from fractions import Fraction
from typing import List, Union

import pyparsing as pp

from utils.superpoly import CoordinateMismatchError, CoordinateSystem, SuperPolynomial, SuperVectorField


Value = Union[SuperPolynomial, SuperVectorField]


class FieldParseError(Exception):
    """Raised when an expression cannot be read."""
    pass


class FieldParser:
    """pyparsing grammar bound to one coordinate system."""

    def __init__(self, system: CoordinateSystem):
        self.system = system
        self._grammar = self._build_grammar()

    def _build_grammar(self) -> pp.ParserElement:
        expr = pp.Forward()

        number = pp.Regex(r"\d+(?:/\d+)?").set_name("number")
        number.set_parse_action(lambda t: [SuperPolynomial.constant(self.system, Fraction(t[0]))])

        name = pp.Regex(r"[A-Za-z]+\d*").set_name("coordinate")
        variable = name.copy().set_parse_action(lambda s, loc, t: [self._variable(t[0], loc)])
        derivation = pp.Suppress("D[") - name + pp.Suppress("]")
        derivation.set_parse_action(lambda s, loc, t: [self._partial(t[0], loc)])

        group = pp.Suppress("(") - expr + pp.Suppress(")")
        atom = number | derivation | variable | group

        exponent = pp.Word(pp.nums).set_name("an integer exponent")
        exponent.set_parse_action(lambda t: [int(t[0])])
        factor = atom + pp.Optional(pp.Suppress("^") - exponent)
        factor.set_parse_action(self._power)

        term = factor + pp.ZeroOrMore(pp.Optional(pp.Suppress("*")) + factor)
        term.set_parse_action(self._product)

        sign = pp.one_of("+ -")
        expr <<= pp.Optional(sign) + term + pp.ZeroOrMore(sign + term)
        expr.set_parse_action(self._sum)
        return expr

    def _variable(self, text: str, where: int) -> SuperPolynomial:
        try:
            return SuperPolynomial.variable(self.system, text)
        except CoordinateMismatchError:
            raise FieldParseError(f"Unknown coordinate {text!r} at {where}")

    def _partial(self, text: str, where: int) -> SuperVectorField:
        try:
            return SuperVectorField.partial(self.system, text)
        except CoordinateMismatchError:
            raise FieldParseError(f"Unknown coordinate {text!r} at {where}")

    def _power(self, tokens: pp.ParseResults) -> List[Value]:
        value = tokens[0]
        if len(tokens) == 1:
            return [value]
        if not isinstance(value, SuperPolynomial):
            raise FieldParseError("Only polynomials can be raised to a power")
        return [value ** tokens[1]]

    def _product(self, tokens: pp.ParseResults) -> List[Value]:
        value = tokens[0]
        for factor in tokens[1:]:
            value = self._multiply(value, factor)
        return [value]

    def _sum(self, tokens: pp.ParseResults) -> List[Value]:
        items = list(tokens)
        sign = 1
        if isinstance(items[0], str):
            sign = -1 if items.pop(0) == "-" else 1
        value = items[0] if sign > 0 else items[0].scale(-1)
        for op, term in zip(items[1::2], items[2::2]):
            value = self._add(value, term, -1 if op == "-" else 1)
        return [value]

    def _parse(self, text: str) -> Value:
        if not text.strip():
            raise FieldParseError("Empty expression")
        try:
            return self._grammar.parse_string(text, parse_all=True)[0]
        except pp.ParseBaseException as e:
            raise FieldParseError(f"Cannot read {text!r}: {e}")

    def parse_polynomial(self, text: str) -> SuperPolynomial:
        value = self._parse(text)
        if not isinstance(value, SuperPolynomial):
            raise FieldParseError(f"Expected a polynomial, got a vector field: {text!r}")
        return value

    def parse_field(self, text: str) -> SuperVectorField:
        value = self._parse(text)
        if isinstance(value, SuperPolynomial):
            if value:
                raise FieldParseError(f"Expected a vector field, got a polynomial: {text!r}")
            return SuperVectorField.zero(self.system)
        return value

    def _add(self, left: Value, right: Value, sign: int) -> Value:
        if isinstance(left, SuperPolynomial) and isinstance(right, SuperPolynomial):
            return left + right.scale(sign)
        if isinstance(left, SuperPolynomial) and not left:
            left = SuperVectorField.zero(self.system)
        if isinstance(right, SuperPolynomial) and not right:
            right = SuperVectorField.zero(self.system)
        if isinstance(left, SuperVectorField) and isinstance(right, SuperVectorField):
            return left + right.scale(sign)
        raise FieldParseError("Cannot add a polynomial and a vector field")

    def _multiply(self, left: Value, right: Value) -> Value:
        if isinstance(left, SuperPolynomial) and isinstance(right, SuperPolynomial):
            return left * right
        if isinstance(left, SuperPolynomial) and isinstance(right, SuperVectorField):
            return right.times(left)
        raise FieldParseError("A vector field can only be multiplied by a polynomial on its left")


def parse_polynomial(system: CoordinateSystem, text: str) -> SuperPolynomial:
    return FieldParser(system).parse_polynomial(text)


def parse_field(system: CoordinateSystem, text: str) -> SuperVectorField:
    return FieldParser(system).parse_field(text)
