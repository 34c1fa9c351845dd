"""Axis probe (with the shift ``f - l*g``) and variable separation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..calculus import SeriesError, expand, two_sided_limit
from ..expr import (
    ZERO,
    Const,
    Var,
    add,
    additive_terms,
    distribute_constants,
    exact_value,
    free_variables,
    is_nonnegative,
    is_zero_expr,
    mul,
    substitute,
)
from ..verdict import Certificate, LimitProblem, Verdict, Witness, format_value


@dataclass
class AxisResult:
    variable: str
    verdict: Verdict | None  # None when the axis lies in the zero set of g
    note: str = ""


@dataclass
class PreliminaryProbeResult:
    restricted_limits: list  # AxisResult
    shift: Fraction | None = None
    shifted_numerator: object = None
    verdict: Verdict | None = None  # set when the probe already decides DNE
    certificate: Certificate = field(default_factory=Certificate)

    def references(self, problem: LimitProblem) -> list:
        """Axis witnesses with their limits, after the shift."""
        out = []
        shift = self.shift or Fraction(0)
        for ar in self.restricted_limits:
            if ar.verdict is not None and ar.verdict.is_exists:
                out.append((axis_path(problem, ar.variable, 1), ar.verdict.value - shift))
        return out


def axis_path(problem: LimitProblem, name: str, sign: int) -> Witness:
    t = Var("t")
    path = {x: (add(c, mul(sign, t)) if x == name else Const(c))
            for x, c in zip(problem.variables, problem.point)}
    return Witness(path, None, f"{name}-axis ({'+' if sign > 0 else '-'})")


def _identically_zero(e) -> bool:
    z = is_zero_expr(e)
    if z is not None:
        return z
    try:
        return expand(e, "t", Fraction(8)).is_zero
    except SeriesError:
        return False


def preliminary_probe(problem: LimitProblem) -> PreliminaryProbeResult:
    """Restrict to each coordinate axis; problem must sit at the origin."""
    cert = Certificate()
    results = []
    for x in problem.variables:
        zero = {y: ZERO for y in problem.variables if y != x}
        f1 = substitute(problem.numerator, zero)
        g1 = substitute(problem.denominator, zero)
        if _identically_zero(g1):
            results.append(AxisResult(x, None, "axis lies in the zero set of the denominator"))
            continue
        v = two_sided_limit(f1, g1, x)
        results.append(AxisResult(x, v))
    out = PreliminaryProbeResult(results, certificate=cert)
    summary = ", ".join(
        f"{r.variable}: {'skipped' if r.verdict is None else r.verdict}" for r in results
    )
    done = [r for r in results if r.verdict is not None]
    bad = [r for r in done if r.verdict.is_dne]
    if bad:
        r = bad[0]
        details = r.verdict.details
        if "left" in details:
            lv, rv = details["left"], details["right"]
            w1, w2 = axis_path(problem, r.variable, 1), axis_path(problem, r.variable, -1)
            w1.limit, w2.limit = _limit_of(rv), _limit_of(lv)
            why = f"one-sided limits along the {r.variable}-axis differ"
        else:
            w1 = axis_path(problem, r.variable, 1)
            w1.limit = _limit_of(r.verdict)
            others = [o for o in done if o is not r and o.verdict.is_exists]
            if others:
                w2 = axis_path(problem, others[0].variable, 1)
                w2.limit = others[0].verdict.value
            else:
                w2 = axis_path(problem, r.variable, -1)
                w2.limit = "bounded" if w1.limit is None else None
            why = f"restricted limit along the {r.variable}-axis is unbounded"
        cert.add("step1-axis-probe", summary, why)
        out.verdict = Verdict.does_not_exist([w1, w2], cert, reason=why)
        return out
    vals = [r.verdict.value for r in done if r.verdict.is_exists]
    if len(vals) == len(done) and vals:
        if len(set(vals)) > 1:
            a = next(r for r in done if r.verdict.value == vals[0])
            b = next(r for r in done if r.verdict.value != vals[0])
            w1, w2 = axis_path(problem, a.variable, 1), axis_path(problem, b.variable, 1)
            w1.limit, w2.limit = a.verdict.value, b.verdict.value
            why = "axis limits differ"
            cert.add("step1-axis-probe", summary, why)
            out.verdict = Verdict.does_not_exist([w1, w2], cert, reason=why)
            return out
        ell = vals[0]
        if ell != 0:
            out.shift = ell
            out.shifted_numerator = distribute_constants(
                add(problem.numerator, mul(-ell, problem.denominator))
            )
            cert.add("step1-axis-probe", summary,
                     f"all axis limits equal {format_value(ell)}; continue with f - {format_value(ell)}*g")
            return out
        cert.add("step1-axis-probe", summary, "all axis limits are 0")
        return out
    cert.add("step1-axis-probe", summary, "some axis limits unresolved; no shift")
    return out


def _limit_of(v: Verdict):
    if v.is_exists:
        return v.value
    if v.divergence:
        return "+inf" if v.divergence > 0 else "-inf"
    return None


def separate(problem: LimitProblem) -> Verdict | None:
    """Bound ``|f_k|/g`` by ``|f_k|/g_k`` for numerator groups in one variable each."""
    f, g = problem.numerator, problem.denominator
    cert = Certificate()
    if f == ZERO:
        cert.add("step2-separation", "numerator is 0", "quotient is identically 0")
        return Verdict.exists(Fraction(0), cert)
    g_terms = additive_terms(distribute_constants(g))
    if not all(is_nonnegative(t) for t in g_terms):
        return None
    by_var: dict = {}
    for t in g_terms:
        names = free_variables(t)
        if len(names) == 1:
            by_var.setdefault(names[0], []).append(t)
    groups: dict = {}
    for t in additive_terms(distribute_constants(f)):
        names = free_variables(t)
        if len(names) != 1:
            return None
        groups.setdefault(names[0], []).append(t)
    origin = {x: Fraction(0) for x in problem.variables}
    pieces = []
    for x, terms in sorted(groups.items()):
        if x not in by_var:
            return None
        fk, gk = add(*terms), add(*by_var[x])
        if exact_value(fk, origin) != 0:
            return None
        v = two_sided_limit(fk, gk, x)
        if not (v.is_exists and v.value == 0):
            return None
        cert.extend(v.certificate)
        pieces.append(f"|{fk}| / ({gk}) -> 0")
    cert.add(
        "step2-separation",
        "; ".join(pieces),
        "every denominator term is nonnegative, so |f_k|/g <= |f_k|/g_k and each piece tends to 0",
    )
    return Verdict.exists(Fraction(0), cert)
