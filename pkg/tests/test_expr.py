from fractions import Fraction

import pytest

from cuntzmod.algebra import adjoint, gen, monomial, multiply, one, projection, zero
from cuntzmod.errors import ExprSyntaxError, UsageError
from cuntzmod.expr import parse, render
from cuntzmod.scalars import QSqrt


def test_parse_examples():
    assert parse("S[1].S[2]'", 2) == monomial(2, (1,), (2,))
    assert parse("1/2*S[1,1] - S[2]'", 2) == monomial(2, (1, 1), (), Fraction(1, 2)) - monomial(2, (), (2,))
    assert parse("I", 2) == one(2)
    assert parse("0", 2) == zero(2)
    assert parse(" 0 ", 2) == zero(2)


def test_parse_products_and_adjoint_blocks():
    # the apostrophe adjoins the whole generator block
    assert parse("S[1,2]'", 2) == monomial(2, (), (1, 2))
    # '.' is the algebra product, evaluated left to right
    assert parse("S[1]'.S[1]", 2) == one(2)
    assert parse("S[1]'.S[2]", 2) == zero(2)
    assert parse("S[1].S[1]'.S[2]", 2) == multiply(projection(2, (1,)), gen(2, 2))


def test_parse_coefficients():
    assert parse("3/2r*S[1]", 2) == monomial(2, (1,), (), QSqrt(2, 0, Fraction(3, 2)))
    assert parse("1r*I", 2) == one(2).scale(QSqrt(2, 0, 1))
    assert parse("-2*I", 2) == one(2).scale(-2)
    assert parse("2*I - 3/4*S[2]'", 3) == one(3).scale(2) - monomial(3, (), (2,), Fraction(3, 4))
    # unary minus on the first term is accepted on input
    assert parse("-S[2]'", 2) == -monomial(2, (), (2,))


def test_parse_whitespace_insensitive():
    a = parse("1/2 * S[1,1]  -  S[2] '", 2)
    b = parse("1/2*S[1,1]-S[2]'", 2)
    assert a == b


def test_parse_errors_carry_byte_offsets():
    with pytest.raises(ExprSyntaxError) as err:
        parse("S[3]", 2)
    assert err.value.offset == 2
    with pytest.raises(ExprSyntaxError) as err:
        parse("S[1", 2)
    assert "expected" in str(err.value)
    with pytest.raises(ExprSyntaxError) as err:
        parse("1/0*I", 2)
    assert "rational" in str(err.value)
    with pytest.raises(ExprSyntaxError) as err:
        parse("S[1] ? S[2]", 2)
    assert err.value.offset == 5
    with pytest.raises(ExprSyntaxError):
        parse("", 2)
    with pytest.raises(ExprSyntaxError):
        parse("1/2", 2)  # a bare nonzero rational is not an element


def test_render_examples():
    assert render(monomial(2, (1,), (2,))) == "S[1].S[2]'"
    assert render(zero(2)) == "0"
    assert render(one(2).scale(Fraction(1, 2))) == "1/2*I"
    assert render(one(2)) == "I"
    assert render(gen(2, 1)) == "S[1]"
    assert render(adjoint(gen(2, 1))) == "S[1]'"


def test_render_signs_stay_in_grammar():
    a = -monomial(2, (), (2,)) + monomial(2, (1, 1), (), Fraction(1, 2))
    text = render(a)
    assert text == "-1*S[2]' + 1/2*S[1,1]"
    assert parse(text, 2) == a


def test_render_mixed_coefficient_splits():
    c = QSqrt(2, Fraction(1, 2), Fraction(-3, 4))
    a = monomial(2, (1,), (), c)
    text = render(a)
    assert text == "1/2*S[1] - 3/4r*S[1]"
    assert parse(text, 2) == a


def test_render_deterministic_order():
    a = monomial(2, (2,), ()) + one(2) + monomial(2, (), (1,)) + monomial(2, (1,), ())
    # degree ascending: S[1]' (-1), I (0), then degree 1 terms by mu
    assert render(a) == "S[1]' + I + S[1] + S[2]"


def test_multi_digit_letters_round_trip():
    a = monomial(12, (10, 11), (12,))
    assert render(a) == "S[10,11].S[12]'"
    assert parse(render(a), 12) == a


def test_render_rejects_numeric_backend():
    with pytest.raises(UsageError):
        render(gen(2, 1).to_numeric())
