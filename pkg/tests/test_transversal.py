from __future__ import annotations

from fractions import Fraction

import pytest

from mvlim.expr import parse
from mvlim.transversal import (
    ComponentSpec,
    ImplicitCurve,
    ParamCurve,
    ZeroSetSpec,
    check_transversality,
    detect_zero_set,
    falsify_nonvanishing,
    parse_inequality,
    resolve_nonisolated,
)
from mvlim.verdict import LimitProblem, Status

F = Fraction
O2 = {"x": F(0), "y": F(0)}
O3 = {"x": F(0), "y": F(0), "z": F(0)}
DIAGONAL = ZeroSetSpec([ParamCurve({"x": parse("s"), "y": parse("s")})], [])


def problem(n, d, names):
    return LimitProblem.from_strings(n, d, list(names), [0] * len(names))


class TestTransversality:
    def test_diagonal_against_x_axis(self):
        ok, cert = check_transversality(DIAGONAL, (1, 0), O2, ["x", "y"])
        assert ok is True and cert.has_proved_step()

    def test_diagonal_tangent(self):
        assert check_transversality(DIAGONAL, (1, 1), O2, ["x", "y"])[0] is False

    def test_paraboloid_vertical(self):
        spec = ZeroSetSpec([ImplicitCurve(parse("z - x^2 - y^2"))], [])
        assert check_transversality(spec, (0, 0, 1), O3, ["x", "y", "z"])[0] is True

    def test_curve_must_pass_through_point(self):
        spec = ZeroSetSpec([ParamCurve({"x": parse("s + 1"), "y": parse("s")})], [])
        with pytest.raises(ValueError):
            check_transversality(spec, (1, 0), O2, ["x", "y"])


class TestFalsification:
    def test_sin_difference_not_falsified(self):
        r = falsify_nonvanishing(parse("sin(x)-sin(y)"), (1, 0), ComponentSpec("all"), ["x", "y"], O2, F(1, 2))
        assert r.counterexample is None
        assert r.status is Status.NUMERIC

    def test_cos_difference_east_and_north(self):
        g = parse("cos(x)-cos(y)")
        east = ComponentSpec("east", None, [parse_inequality("x - y > 0"), parse_inequality("x + y > 0")])
        north = ComponentSpec("north", None, [parse_inequality("y - x > 0"), parse_inequality("x + y > 0")])
        assert falsify_nonvanishing(g, (1, 0), east, ["x", "y"], O2).counterexample is None
        hit = falsify_nonvanishing(g, (1, 0), north, ["x", "y"], O2).counterexample
        assert hit is not None and abs(hit[0]) < 1e-9

    def test_symbolic_zero(self):
        r = falsify_nonvanishing(parse("x"), (0, 1), ComponentSpec("all"), ["x", "y"], O2)
        assert r.counterexample is not None and r.status is Status.PROVED

    def test_constant_derivative_is_proved(self):
        r = falsify_nonvanishing(parse("x - y^2"), (1, 0), ComponentSpec("all"), ["x", "y"], O2)
        assert r.counterexample is None and r.status is Status.PROVED

    def test_samples_must_be_positive(self):
        with pytest.raises(ValueError):
            falsify_nonvanishing(parse("x"), (1, 0), ComponentSpec("all"), ["x", "y"], O2, samples=0)


class TestDetection:
    def test_sin_pattern(self):
        spec = detect_zero_set(parse("sin(x)-sin(y)"), ["x", "y"], O2)
        assert [c.equation for c in spec.curves] == [parse("x - y")]

    def test_cos_pattern_gives_both_diagonals(self):
        spec = detect_zero_set(parse("cos(x)-cos(y)"), ["x", "y"], O2)
        assert sorted(str(c.equation) for c in spec.curves) == sorted(["x - y", "x + y"])

    def test_scaled_pattern(self):
        assert detect_zero_set(parse("3*(tan(z-x^2)-tan(y^2))"), ["x", "y", "z"], O3) is not None

    def test_non_pattern(self):
        assert detect_zero_set(parse("x^2+y^2"), ["x", "y"], O2) is None


class TestResolve:
    def test_sin_difference(self):
        v = resolve_nonisolated(problem("x-y", "sin(x)-sin(y)", "xy"), DIAGONAL)
        assert v.is_exists and v.value == 1
        statuses = {s.tag: s.status for s in v.certificate.steps}
        assert statuses["nonvanishing-derivative"] is Status.NUMERIC

    def test_paraboloid(self):
        spec = ZeroSetSpec([ImplicitCurve(parse("z - x^2 - y^2"))], [])
        v = resolve_nonisolated(problem("sin(z)-sin(x^2+y^2)", "tan(z-x^2)-tan(y^2)", "xyz"), spec)
        assert v.is_exists and v.value == 1

    def test_cos_difference_four_components(self):
        v = resolve_nonisolated(problem("x^2-y^2", "cos(x)-cos(y)", "xy"))
        assert v.is_exists and v.value == -2
        assert len(v.details["components"]) == 4

    def test_direction_scaling_gives_identical_quotient(self):
        def run(d):
            comp = ComponentSpec("all", d)
            spec = ZeroSetSpec(DIAGONAL.curves, [comp])
            return resolve_nonisolated(problem("x-y", "sin(x)-sin(y)", "xy"), spec)

        a, b, c = run((F(1), F(0))), run((F(3), F(0))), run((F(-1, 2), F(0)))
        assert a.details["quotients"] == b.details["quotients"] == c.details["quotients"]
        assert a.value == b.value == c.value == 1

    def test_disagreeing_components_give_dne(self):
        # (x - y)/(sin(x) - sin(y)) * sign is mimicked by a pair of different one-sided quotients
        spec = ZeroSetSpec.from_json({
            "curves": [{"implicit": "y"}],
            "components": [
                {"id": "upper", "direction": [0, 1], "region": ["y > 0"]},
                {"id": "lower", "direction": [0, 1], "region": ["y < 0"]},
            ],
        })
        v = resolve_nonisolated(problem("abs(y)", "y", "xy"), spec)
        assert v.is_dne and len(v.witnesses) == 2

    def test_from_json_round_trip(self):
        spec = ZeroSetSpec.from_json({
            "curves": [{"param": {"x": "s", "y": "s"}}],
            "components": [{"id": "E1", "direction": ["1", "0"], "region": ["x - y > 0"], "seeds": [["1/8", "0"]]}],
        })
        assert spec.components[0].direction == (1, 0)
        assert spec.components[0].seeds == [(F(1, 8), F(0))]
        assert spec.components[0].contains({"x": 0.2, "y": 0.1})
