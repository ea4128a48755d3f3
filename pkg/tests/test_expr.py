from fractions import Fraction

import pytest

from qforge.cli.expr import BinOp, Call, Neg, Pow, QPow, Rat, Var, evaluate, parse_expression, render
from qforge.errors import ArityError, InvalidArgument, ParseError, UnboundVariable
from qforge.services.qcore import cauchy_P, phi_series, ratio_coeff
from qforge.services.trivariate import F_poly


def test_parse_call():
    assert parse_expression("F(1; x, y, z)") == Call("F", (1,), (Var("x"), Var("y"), Var("z")))


def test_parse_sum_with_q_power():
    node = parse_expression("P(2; x, y) + q^-1 * z")
    assert node == BinOp("+", Call("P", (2,), (Var("x"), Var("y"))), BinOp("*", QPow(-1), Var("z")))


def test_missing_comma_position():
    with pytest.raises(ParseError) as info:
        parse_expression("F(1; x y z)")
    assert (info.value.line, info.value.column) == (1, 8)
    assert info.value.expected == (")", ",")


def test_unknown_symbol_and_arity():
    with pytest.raises(UnboundVariable) as info:
        parse_expression("x + w")
    assert info.value.column == 5
    with pytest.raises(ArityError):
        parse_expression("F(1; x, y)")
    with pytest.raises(ArityError):
        parse_expression("qbinom(2, 3)")
    with pytest.raises(ArityError):
        parse_expression("phi(1, 0, 4; a)")
    with pytest.raises(ParseError):
        parse_expression("x^1/2")
    with pytest.raises(ParseError):
        parse_expression("x $ y")


def test_precedence():
    assert parse_expression("-x^2") == Neg(Pow(Var("x"), 2))
    assert parse_expression("a - x - y") == BinOp("-", BinOp("-", Var("a"), Var("x")), Var("y"))
    assert parse_expression("3/2*x") == BinOp("*", Rat(Fraction(3, 2)), Var("x"))


@pytest.mark.parametrize(
    "text",
    [
        "F(2; x, y, z)",
        "P(2; x, y) + q^-1*z",
        "a - (x - y)",
        "-(x*y) + (q)^2",
        "x*-y / 3/2",
        "(x + y)^3 - x^3",
        "kernel(2; y, zeta, xi, z)",
        "phi(1, 0, 4; a, z)",
        "qbinom(4, 2)*psi(2; a, x, y)",
        "-3/2*q^2*qpoch(3; a)",
    ],
)
def test_render_round_trip(text):
    ast = parse_expression(text)
    assert parse_expression(render(ast)) == ast
    assert render(parse_expression(render(ast))) == render(ast)


def test_evaluate_calls(xyz):
    x, y, z = xyz
    assert evaluate(parse_expression("F(2; x, y, z)")) == F_poly(2)
    assert evaluate(parse_expression("P(2; x, y)")) == cauchy_P(2, x, y)
    assert evaluate(parse_expression("qaddpow(3; x, y) - P(3; x, -y)")).is_zero
    assert evaluate(parse_expression("kernel(2; y, zeta, xi, z)")) == ratio_coeff(2, "y", "zeta", "xi", "z")
    assert evaluate(parse_expression("phi(1, 0, 3; a, z)")) == phi_series(["a"], [], z, 3).partial_sum()
    assert evaluate(parse_expression("(x + y)/2 * 2")) == x + y


def test_division_by_polynomial_rejected():
    with pytest.raises(InvalidArgument):
        evaluate(parse_expression("x / y"))


def test_zero_denominator_literal():
    with pytest.raises(ParseError) as info:
        parse_expression("x + 1/0")
    assert (info.value.line, info.value.column) == (1, 5)


def test_deep_nesting_is_a_parse_error():
    with pytest.raises(ParseError):
        parse_expression("(" * 600 + "x" + ")" * 600)


def test_call_orders_respect_max_order(settings_env):
    settings_env(max_order=4)
    assert evaluate(parse_expression("F(4; x, y, z)")) == F_poly(4)
    with pytest.raises(InvalidArgument):
        evaluate(parse_expression("F(5; x, y, z)"))
    with pytest.raises(InvalidArgument):
        evaluate(parse_expression("phi(1, 0, 5; a, z)"))
