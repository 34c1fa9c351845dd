from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvlim.expr import (
    UNDEFINED,
    Func,
    Monomial,
    Mul,
    ParseError,
    Pow,
    Var,
    as_polynomial,
    canonicalize,
    evaluate,
    free_variables,
    parse,
    power,
    to_poly,
)
from mvlim.expr.poly import evaluate_monomials
from support import THREAD_NUM, expressions, polynomials


def test_parse_product_of_powers():
    e = parse("x^2*y")
    assert isinstance(e, Mul)
    assert Pow(Var("x"), Fraction(2)) in e.factors and Var("y") in e.factors


def test_parse_quotient_keeps_structure():
    e = parse("(x - y)/(sin(x) - sin(y))")
    assert e == parse("(x-y) * (sin(x)-sin(y))^(-1/1)")
    assert free_variables(e) == ("x", "y")


def test_unbalanced_parenthesis_reports_offset():
    with pytest.raises(ParseError) as info:
        parse("x^(1/2")
    assert info.value.offset == 6


@pytest.mark.parametrize("text", ["2x", "x^", "sin x", "foo(x)", "x ** 2", ""])
def test_rejects_malformed(text):
    with pytest.raises(ParseError):
        parse(text)


def test_evaluate_examples():
    assert evaluate(parse("x*y"), {"x": 2, "y": 3}) == 6
    h = parse("(x-y)/(sin(x)-sin(y))")
    assert evaluate(h, {"x": 0.1, "y": 0.05}) == pytest.approx(1.0029235748511, rel=1e-12)
    assert evaluate(h, {"x": 0.1, "y": 0.1}) is UNDEFINED


def test_sqrt_of_negative_is_undefined():
    assert evaluate(parse("sqrt(x)"), {"x": -1.0}) is UNDEFINED


def test_free_variables():
    assert free_variables(parse("x^2+y^4")) == ("x", "y")
    assert free_variables(parse("7")) == ()
    assert free_variables(parse(THREAD_NUM)) == ("x", "y", "z")


def test_as_polynomial():
    mons = as_polynomial(parse("x^6+x^2*y^2+y^6"))
    assert sorted((m.coefficient, m.powers) for m in mons) == sorted([
        (1, (("x", 6),)), (1, (("x", 2), ("y", 2))), (1, (("y", 6),)),
    ])
    assert as_polynomial(parse("sin(x)+y")) is None
    mons = as_polynomial(parse("(x+y)^2"))
    assert {m.powers: m.coefficient for m in mons} == {
        (("x", 2),): 1, (("x", 1), ("y", 1)): 2, (("y", 2),): 1,
    }


def test_even_root_uses_absolute_value():
    # x^(1/2) with even denominator is |x|^(1/2); odd denominators keep the sign
    assert evaluate(parse("x^(1/2)"), {"x": -4.0}) == pytest.approx(2.0)
    assert evaluate(parse("x^(1/3)"), {"x": -8.0}) == pytest.approx(-2.0)


def test_power_merge_respects_parity():
    x = Var("x")
    assert power(power(x, 2), Fraction(1, 2)) != x  # |x|, not x
    assert power(power(x, 3), Fraction(1, 3)) == x
    assert power(x, 2) * power(x, 3) == power(x, 5)


def test_cancellation_in_canonical_form():
    assert parse("x - x") == parse("0")
    assert parse("2*x*y - y*x") == parse("x*y")
    assert parse("(x+1)*(x+1)") == parse("(x+1)^2")


@settings(max_examples=200, deadline=None)
@given(expressions)
def test_print_parse_round_trip(e):
    assert parse(str(e)) == e


@settings(max_examples=200, deadline=None)
@given(expressions, st.lists(st.floats(-2, 2), min_size=3, max_size=3))
def test_canonicalize_preserves_value(e, pt):
    a = dict(zip("xyz", pt))
    v1, v2 = evaluate(e, a), evaluate(canonicalize(e), a)
    if v1 is UNDEFINED or v2 is UNDEFINED or not (math.isfinite(v1) and math.isfinite(v2)):
        return
    assert v1 == pytest.approx(v2, rel=1e-12, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(polynomials, st.lists(st.floats(-2, 2), min_size=3, max_size=3))
def test_monomial_list_matches_expression(e, pt):
    mons = as_polynomial(e)
    assert mons is not None
    a = dict(zip("xyz", pt))
    assert evaluate_monomials(mons, a) == pytest.approx(evaluate(e, a), rel=1e-10, abs=1e-10)


def test_to_poly_none_for_functions():
    assert to_poly(parse("x*sin(y)")) is None
    assert isinstance(parse("sin(x)"), Func)


def test_vectorized_evaluation_matches_scalar():
    from mvlim.expr import evaluate_array

    e = parse("sin(x)*y^2 + sqrt(x^2+1)")
    xs, ys = np.linspace(-1, 1, 7), np.linspace(0, 2, 7)
    arr = evaluate_array(e, {"x": xs, "y": ys})
    for i in range(7):
        assert arr[i] == pytest.approx(evaluate(e, {"x": xs[i], "y": ys[i]}))
