from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvlim.calculus import expand, substitute
from mvlim.expr import Const, Var, add, evaluate, mul, parse, power
from mvlim.isolated import (
    SquareDecomposition,
    curve_probe,
    enumerate_square_decompositions,
    identity_holds,
    parse_hints,
    polar_degree_bound,
    preliminary_probe,
    resolve_isolated,
    separate,
    solve_triangular,
    taylor_replace,
    verify_solution,
)
from mvlim.isolated.squares import NONNEGATIVE, UNKNOWN, classify_residual
from mvlim.verdict import LimitProblem
from support import GOLDEN, THREAD_DEN, THREAD_HINT, THREAD_NUM

F = Fraction
XY = ["x", "y"]


def prob(n, d, names="xy"):
    return LimitProblem.from_strings(n, d, list(names), [0] * len(names))


def decs(g, names=XY):
    return {d.describe(): d for d in enumerate_square_decompositions(parse(g), names)}


class TestPreliminaryProbe:
    def test_shift_for_separation_example(self):
        r = preliminary_probe(prob("x^2+sin(y)^4", "sin(x)^2+y^4"))
        assert r.shift == 1
        assert r.shifted_numerator == parse("x^2+sin(y)^4-sin(x)^2-y^4")

    def test_no_shift_when_axes_give_zero(self):
        r = preliminary_probe(prob("x*y", "x^2+y^2"))
        assert r.shift is None and r.verdict is None

    def test_axis_limits_differ(self):
        r = preliminary_probe(prob("x", "x+y^2"))
        assert r.verdict.is_dne
        assert {w.limit for w in r.verdict.witnesses} == {0, 1}


class TestSeparation:
    def test_pieces_vanish(self):
        v = separate(prob("x^2-sin(x)^2+sin(y)^4-y^4", "sin(x)^2+y^4"))
        assert v.is_exists and v.value == 0
        assert v.certificate.steps[-1].tag == "step2-separation"

    def test_zero_numerator(self):
        assert separate(prob("0", "x^2+y^2")).value == 0

    def test_mixed_term_falls_through(self):
        assert separate(prob("x*y", "x^2+y^2")) is None


class TestSquares:
    def test_single_decomposition(self):
        assert list(decs("x^6+y^4")) == ["u = (x^3, y^2), v = 0"]
        assert list(decs("x^2+y^2")) == ["u = (x, y), v = 0"]

    def test_candidates_for_three_terms(self):
        d = decs("x^6+x^2*y^2+y^6")
        assert "u = (x^3, y^3), v = x^2*y^2" in d
        assert "u = (x*y, x^3), v = y^6" in d
        assert d["u = (x*y, x^3), v = y^6"].residual_class == NONNEGATIVE

    def test_residual_with_mixed_sign_and_low_degree(self):
        v = parse("-x*y")
        cls, _ = classify_residual(v, [(F(2), F(0)), (F(0), F(2))], XY)
        assert cls == UNKNOWN

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(1, 3)), min_size=1, max_size=4))
    def test_identity_for_every_emitted_decomposition(self, terms):
        g = add(*(mul(c, power(Var("x"), 2 * a), power(Var("y"), 2 * b)) for a, b, c in terms if a or b))
        if isinstance(g, Const):
            return
        for d in enumerate_square_decompositions(g, XY):
            assert identity_holds(d, g)
            assert all(evaluate(u, {"x": 0.0, "y": 0.0}) == 0 for u in d.u)


class TestCurveProbe:
    def test_lines_depend_on_m(self):
        v, cp, _ = curve_probe(prob("x*y", "x^2+y^2"), [parse("x"), parse("y")])
        assert v.is_dne
        values = {e.value for e in cp.table if e.value is not None}
        assert F(1, 2) in values and len(values) > 1

    def test_parabolas_depend_on_m(self):
        v, cp, _ = curve_probe(prob("x^2*y", "x^4+y^2"), [parse("x^2"), parse("y")])
        assert v.is_dne
        assert v.witnesses[0].limit == F(1, 2)

    def test_thread(self):
        p = prob(THREAD_NUM, THREAD_DEN, "xyz")
        u = [parse(s) for s in THREAD_HINT["u"]]
        v, cp, _ = curve_probe(p, u, drop=["u2"], m_hint=[1, 1, 1])
        assert v.is_dne
        w = v.witnesses[0]
        assert w.limit == 1
        assert w.path == {"x": parse("t^3"), "y": parse("t^12+t^9-t^8"), "z": parse("t^4")}

    def test_zero_for_bounded_example(self):
        v, cp, why = curve_probe(prob("x^3*y^3", "x^6+y^4"), [parse("x^3"), parse("y^2")])
        assert v is None
        assert all(e.value == 0 for e in cp.table if e.value is not None)

    # m entries are perfect powers so the roots stay rational
    @pytest.mark.parametrize("us,m", [(["x^3", "y^2"], [8, 9]), (["x^2", "y"], [4, 3]),
                                      (["x^4", "y-x^3+z^2", "z^3"], [16, 3, 8])])
    def test_solution_reproduces_m_t(self, us, m):
        names = ["x", "y", "z"] if len(us) == 3 else XY
        u = [parse(s) for s in us]
        m = [F(c) for c in m]
        sol = solve_triangular(u, names, m, {})
        assert verify_solution(u, sol, m)
        for ui, mi in zip(u, m):
            s = expand(substitute(ui, sol.param), "t", F(8))
            assert s.terms == ((F(1), mi),)


class TestPolarBound:
    def test_five_halves(self):
        d = decs("x^6+y^4")["u = (x^3, y^2), v = 0"]
        v, pc, _ = polar_degree_bound(parse("x^3*y^3"), d, XY)
        assert v.value == 0 and pc.alpha_min == F(5, 2)
        assert pc.terms[0].c == (F(1), F(3, 2))
        assert pc.replay()

    def test_rejected_five_thirds(self):
        d = decs("x^6+x^2*y^2+y^6")["u = (x^3, y^3), v = x^2*y^2"]
        v, pc, reason = polar_degree_bound(parse("x^3*y^2"), d, XY)
        assert v is None and pc.alpha_min == F(5, 3)
        assert reason == "alpha = 5/3 <= 2 for term x^3*y^2"
        assert not pc.replay()

    def test_seven_thirds(self):
        d = decs("x^6+x^2*y^2+y^6")["u = (x*y, x^3), v = y^6"]
        v, pc, _ = polar_degree_bound(parse("x^3*y^2"), d, XY)
        assert pc.alpha_min == F(7, 3) and pc.replay()

    def test_replay_detects_tampering(self):
        d = decs("x^6+y^4")["u = (x^3, y^2), v = 0"]
        _, pc, _ = polar_degree_bound(parse("x^3*y^3"), d, XY)
        pc.terms[0].c = (F(1), F(2))
        assert not pc.replay()

    def test_numeric_bound_holds(self):
        # |term| <= C * rho^alpha on sampled points near the origin
        d = decs("x^6+x^2*y^2+y^6")["u = (x*y, x^3), v = y^6"]
        _, pc, _ = polar_degree_bound(parse("x^3*y^2"), d, XY)
        rng = np.random.default_rng(0)
        ratios = []
        for _ in range(1000):
            x, y = rng.uniform(-0.3, 0.3, 2)
            rho = np.sqrt((x * y) ** 2 + x ** 6)
            if 0 < rho <= 0.25:
                ratios.append(abs(x ** 3 * y ** 2) / rho ** float(pc.alpha_min))
        assert max(ratios) < 10


class TestTaylor:
    def test_replacement_of_cosine_quotient(self):
        tr = taylor_replace(prob("2-2*cos(x^2*y^2)", "x^10+x^6*y^2+y^6-x^9*sin(y)"))
        assert tr.changed
        assert tr.problem.numerator == parse("x^4*y^4")
        assert tr.problem.denominator == parse("x^10+x^6*y^2+y^6")
        assert [pc.alpha_min for pc in tr.polar_certificates] == [F(11, 5)]

    def test_polynomial_problem_unchanged(self):
        tr = taylor_replace(prob("x*y", "x^2+y^2"))
        assert not tr.changed and tr.approximations == []


class TestResolveIsolated:
    def test_separation_example_with_shift(self):
        v = resolve_isolated(prob("x^2+sin(y)^4", "sin(x)^2+y^4"))
        assert v.value == 1
        assert "un-shift" in [s.tag for s in v.certificate.steps]

    def test_parabola_witnesses(self):
        v = resolve_isolated(prob("x^2*y", "x^4+y^2"))
        assert v.is_dne
        a, b = v.witnesses
        assert a.path["y"] == parse("t^2") and a.limit == F(1, 2)
        assert abs(float(a.limit) - float(b.limit)) > 0.1

    def test_cosine_quotient(self):
        v = resolve_isolated(prob("2-2*cos(x^2*y^2)", "x^10+x^6*y^2+y^6-x^9*sin(y)"))
        assert v.is_exists and v.value == 0

    def test_first_attempt_recorded(self):
        v = resolve_isolated(prob("x^3*y^2", "x^6+x^2*y^2+y^6"))
        assert v.value == 0
        first = v.details["attempts"][0]
        assert first["decomposition"] == "u = (x^3, y^3), v = x^2*y^2"
        assert first["outcome"] == "rejected" and first["alpha"] == F(5, 3)
        assert v.details["attempts"][1]["alpha"] == F(7, 3)

    def test_thread_needs_hint(self):
        p = prob(THREAD_NUM, THREAD_DEN, "xyz")
        assert not resolve_isolated(p).is_conclusive
        v = resolve_isolated(p, THREAD_HINT)
        assert v.is_dne and v.witnesses[0].limit == 1

    def test_hint_can_omit_residual(self):
        hint = {"u": ["x", "y"]}
        v = resolve_isolated(prob("x*y", "x^2+y^2"), hint)
        assert v.is_dne

    def test_bad_hint_rejected(self):
        v = resolve_isolated(prob("x^3*y^3", "x^6+y^4"), {"u": ["x^2", "y"], "v": "0"})
        assert v.value == 0
        assert v.details["attempts"][0]["outcome"] == "rejected"

    def test_parse_hints_at_shifted_point(self):
        (d,) = parse_hints({"u": ["x - 1", "y"]}, XY, {"x": F(1), "y": F(0)})
        assert d.u == [parse("x"), parse("y")]

    def test_nonorigin_point(self):
        p = LimitProblem.from_strings("(x-1)*y", "(x-1)^2+y^2", XY, [1, 0])
        v = resolve_isolated(p)
        assert v.is_dne
        assert v.witnesses[0].path["x"] == parse("1 + t")

    @pytest.mark.parametrize("case", [g for g in GOLDEN if g[5] != "dne" and g[0] in
                                      ("separation", "polar-5/2", "polar-7/3", "taylor-replace")],
                             ids=lambda g: g[0])
    def test_shift_monotonicity(self, case):
        _, n, d, names, _, value = case
        p = prob(n, d, names)
        assert resolve_isolated(p).value == value
        shifted = LimitProblem(add(p.numerator, mul(-value, p.denominator)), p.denominator, p.variables, p.point)
        assert resolve_isolated(shifted).value == 0
