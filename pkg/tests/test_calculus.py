from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvlim.calculus import (
    NotReducible,
    differentiate,
    directional_derivative,
    expand,
    leading_term,
    puiseux_expand,
    restricted_limit,
    series_add,
    series_from_terms,
    series_mul,
    substitute,
    taylor_leading,
    two_sided_limit,
    univariate_limit,
)
from mvlim.expr import Var, as_expr, distribute_constants, evaluate, free_variables, parse
from mvlim.oracle import finite_difference_check
from support import THREAD_DEN, THREAD_NUM, THREAD_PATH, polynomials, random_smooth_expr, unit_points

F = Fraction


def P(s):
    return parse(s)


class TestDifferentiation:
    def test_sin_difference(self):
        assert differentiate(P("sin(x)-sin(y)"), "x") == P("cos(x)")

    def test_polynomial(self):
        assert differentiate(P("x^2+y^2"), "x") == P("2*x")

    def test_tan_chain_rule(self):
        assert differentiate(P("tan(z-x^2)"), "z") == P("sec(z-x^2)^2")

    def test_directional(self):
        assert directional_derivative(P("sin(x)-sin(y)"), (1, 0), ["x", "y"]) == P("cos(x)")
        assert directional_derivative(P("cos(x)-cos(y)"), (0, 1), ["x", "y"]) == P("sin(y)")
        assert directional_derivative(P("x"), (1, 1), ["x", "y"]) == P("1")

    def test_zero_direction_rejected(self):
        with pytest.raises(ValueError):
            directional_derivative(P("x"), (0, 0), ["x", "y"])

    def test_sqrt_and_abs(self):
        assert differentiate(P("sqrt(x)"), "x") == P("1/(2*sqrt(x))")
        d = differentiate(P("abs(x^2-4)"), "x")
        assert evaluate(d, {"x": 3.0}) == pytest.approx(6.0)
        assert evaluate(d, {"x": 1.0}) == pytest.approx(-2.0)

    def test_finite_differences_simple(self):
        e = P("sin(x)-sin(y)")
        rng = np.random.default_rng(3)
        assert finite_difference_check(e, (1, 0), ["x", "y"], unit_points(rng, 2, 100)) < 1e-5
        assert finite_difference_check(P("7"), (1, 0), ["x", "y"], unit_points(rng, 2, 5)) == 0
        assert finite_difference_check(P("x^2"), (1,), ["x"], [(1.0,)]) < 1e-9

    @settings(max_examples=60, deadline=None)
    @given(polynomials, st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)),
           st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)),
           st.integers(-3, 3), st.integers(-3, 3))
    def test_linear_in_direction(self, e, v, w, a, b):
        names = ["x", "y", "z"]
        combo = tuple(a * vi + b * wi for vi, wi in zip(v, w))
        if not any(v) or not any(w) or not any(combo):
            return
        lhs = directional_derivative(e, combo, names)
        rhs = parse(f"({a})*({directional_derivative(e, v, names)}) + ({b})*({directional_derivative(e, w, names)})")
        assert distribute_constants(lhs) == distribute_constants(rhs)

    def test_random_functions_match_central_differences(self):
        rng = np.random.default_rng(11)
        for i in range(40):
            names = ["x", "y", "z"][: int(rng.integers(1, 4))]
            e = random_smooth_expr(rng, names)
            v = tuple(F(int(rng.integers(1, 4))) for _ in names)
            assert finite_difference_check(e, v, names, unit_points(rng, len(names), 3)) < 1e-5


class TestSubstitution:
    def test_parabola_restriction(self):
        e = substitute(P("x^2*y/(x^4+y^2)"), {"y": P("x^2")})
        assert e == P("1/2")

    def test_identity(self):
        assert substitute(P("x"), {"x": P("x")}) == P("x")

    def test_thread_restriction_is_univariate(self):
        path = {k: P(v) for k, v in THREAD_PATH.items()}
        num = substitute(P(THREAD_NUM), path)
        assert free_variables(num) == ("t",)
        s = puiseux_expand(num, F(30))
        assert s.terms[0] == (F(24), F(3))


class TestSeries:
    def test_sin(self):
        s = puiseux_expand(P("sin(t)"), F(4))
        assert s.terms == ((F(1), F(1)), (F(3), F(-1, 6)))
        assert s.order == 4

    def test_fractional_quotient(self):
        s = puiseux_expand(P("t^(5/2)/(2*t^2)"), F(2))
        assert s.terms[0] == (F(1, 2), F(1, 2))

    def test_thread_leading_terms(self):
        path = {k: P(v) for k, v in THREAD_PATH.items()}
        assert leading_term(substitute(P(THREAD_NUM), path), "t") == (F(24), F(3))
        assert leading_term(substitute(P(THREAD_DEN), path), "t") == (F(24), F(3))

    def test_terms_at_or_above_order_are_dropped(self):
        assert puiseux_expand(P("t^2 + 3*t^5"), F(6)).terms == ((F(2), F(1)), (F(5), F(3)))
        assert puiseux_expand(P("t^2 + 3*t^5"), F(3)).terms == ((F(2), F(1)),)

    def test_adaptive_doubling_finds_cancelled_leading_term(self):
        # sin(t) - t + t^3/6 starts at t^5, beyond the starting order
        assert leading_term(P("sin(t) - t + t^3/6"), "t", order=F(2)) == (F(5), F(1, 120))

    @settings(max_examples=80, deadline=None)
    @given(*(st.lists(st.tuples(st.sampled_from([F(0), F(1, 2), F(1), F(4, 3), F(2), F(5, 2)]),
                                st.fractions(-4, 4, max_denominator=5)), max_size=4) for _ in range(3)))
    def test_series_ring_axioms(self, ta, tb, tc):
        a, b, c = (series_from_terms(t, F(3)) for t in (ta, tb, tc))
        assert series_add(series_add(a, b), c).terms == series_add(a, series_add(b, c)).terms
        assert series_mul(a, b).terms == series_mul(b, a).terms
        assert series_add(a, b).terms == series_add(b, a).terms
        assert series_mul(series_mul(a, b), c).terms == series_mul(a, series_mul(b, c)).terms

    def test_truncation_is_respected(self):
        s = expand(P("exp(t)"), "t", F(3))
        assert all(e < 3 for e, _ in s.terms)
        assert [c for _, c in s.terms] == [1, 1, F(1, 2)]


class TestUnivariateLimit:
    def test_axis_restriction_of_separation_example(self):
        v = univariate_limit(P("t^2"), P("sin(t)^2"))
        assert v.is_exists and v.value == 1

    def test_zero_and_unbounded(self):
        assert univariate_limit(P("t^3"), P("t^2")).value == 0
        v = univariate_limit(P("t^2"), P("t^3"))
        assert v.is_dne and v.divergence == 1
        v = univariate_limit(P("-t^2"), P("t^3"))
        assert v.is_dne and v.divergence == -1

    def test_two_sided(self):
        assert two_sided_limit(P("x^2"), P("x^2"), "x").value == 1
        v = two_sided_limit(P("x"), P("abs(x)"), "x")
        assert v.is_dne and v.details["right"] != v.details["left"]

    def test_restricted_limit_along_thread(self):
        path = {k: P(v) for k, v in THREAD_PATH.items()}
        v = restricted_limit(P(THREAD_NUM), P(THREAD_DEN), path)
        assert v.is_exists and v.value == 1


class TestTaylorLeading:
    def test_cosine_numerator(self):
        sa = taylor_leading(P("2-2*cos(x^2*y^2)"))
        assert sa.leading == P("x^4*y^4")
        assert sa.equivalence_ratio_limit == 1

    def test_sine_times_monomial(self):
        assert taylor_leading(P("-x^9*sin(y)")).leading == P("-x^9*y")

    def test_plain_sine(self):
        assert taylor_leading(P("sin(x)")).leading == P("x")

    def test_ratio_is_exactly_one_on_reduction(self):
        sa = taylor_leading(P("2-2*cos(x^2*y^2)"))
        u = Var("u__")
        orig = substitute(sa.original, {"x": u, "y": as_expr(1)})
        lead = substitute(sa.leading, {"x": u, "y": as_expr(1)})
        assert univariate_limit(orig, lead, "u__").value == 1

    def test_not_reducible(self):
        with pytest.raises(NotReducible):
            taylor_leading(P("sin(x) + cos(y) - 1"))
