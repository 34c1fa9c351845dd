"""Curve probes: solve ``u_i(x) = m_i t`` and compare restricted limits.

The system is solved triangularly, one new variable per equation.  The
ratio as a function of ``m`` is sampled at a few exact rational vectors,
chosen as perfect ``L``-th powers so every root stays rational.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from ..calculus import SeriesError, expand, leading_term, restricted_limit
from ..expr import (
    Add,
    Const,
    Expr,
    Func,
    Mul,
    Pow,
    Var,
    add,
    from_poly,
    func,
    mul,
    power,
    substitute,
    to_poly,
)
from ..verdict import Certificate, LimitProblem, Verdict, Witness, format_value

T = "t"
MIN_SEPARATION = 0.1


class Unsolvable(ValueError):
    pass


@dataclass
class SolveStep:
    u_index: int
    variable: str
    k: int


@dataclass
class Solution:
    param: dict  # variable -> Expr in t
    steps: list  # SolveStep
    conditions: list  # text


def _split_in(p: dict, x: str):
    """``(k, M, R)`` with ``p = M * x^k + R`` and ``x`` absent from ``M``, ``R``."""
    coef, rest, ks = {}, {}, set()
    for key, c in p.items():
        d = dict(key)
        e = d.pop(x, Fraction(0))
        other = tuple(sorted(d.items()))
        if e == 0:
            rest[other] = rest.get(other, 0) + c
        else:
            ks.add(e)
            coef[other] = coef.get(other, 0) + c
    if len(ks) != 1:
        raise Unsolvable(f"{x} appears with several exponents")
    (k,) = ks
    if k.denominator != 1 or k < 0:
        raise Unsolvable(f"{x} has exponent {k}")
    return int(k), from_poly(coef), from_poly(rest)


def solve_triangular(us: Sequence[Expr], variables: Sequence[str], m: Sequence[Fraction],
                     branch: Mapping[str, int] | None = None) -> Solution:
    """Parameterize ``x`` with ``u_i(x) = m_i t`` for all i, t > 0."""
    branch = branch or {}
    polys = []
    for ui in us:
        p = to_poly(ui)
        if p is None:
            raise Unsolvable(f"{ui} is not polynomial")
        polys.append(p)
    solved: dict = {}
    steps, conditions = [], []
    todo = list(range(len(us)))
    t = Var(T)
    while todo:
        progress = False
        for i in list(todo):
            names = {x for key in polys[i] for x, _ in key}
            unknown = [x for x in names if x not in solved]
            if len(unknown) != 1:
                if not unknown:
                    raise Unsolvable(f"u{i + 1} introduces no new variable")
                continue
            x = unknown[0]
            k, M, R = _split_in(polys[i], x)
            rhs = mul(add(mul(m[i], t), mul(-1, substitute(R, solved))), power(substitute(M, solved), -1))
            if k % 2 == 0:
                s = branch.get(x, 1)
                conditions.append(f"{x} = {'+' if s > 0 else '-'}({rhs})^(1/{k}) needs {rhs} > 0")
                val = mul(s, power(rhs, Fraction(1, k)))
            else:
                val = power(rhs, Fraction(1, k))
            solved[x] = val
            steps.append(SolveStep(i, x, k))
            todo.remove(i)
            progress = True
            break
        if not progress:
            raise Unsolvable("no equation introduces exactly one new variable")
    missing = [x for x in variables if x not in solved]
    if missing:
        raise Unsolvable(f"variables {missing} are not determined")
    return Solution(solved, steps, conditions)


def _branch_ok(sol: Solution) -> bool:
    """Every even root has a positive radicand for small t > 0."""
    for st in sol.steps:
        if st.k % 2 == 0:
            val = sol.param[st.variable]
            base = _radicand(val)
            if base is None:
                return False
            try:
                _, c = leading_term(base, T)
            except SeriesError:
                return False
            if c <= 0:
                return False
    return True


def _radicand(e: Expr):
    for f in (e.factors if isinstance(e, Mul) else (e,)):
        if isinstance(f, Pow) and f.exponent.denominator % 2 == 0:
            return f.base
    if isinstance(e, Pow):
        return e.base
    return None


def verify_solution(us: Sequence[Expr], sol: Solution, m: Sequence[Fraction], cap=Fraction(16)) -> bool:
    """Substituting the parameterization gives exactly ``m_i t`` (term by term)."""
    for ui, mi in zip(us, m):
        try:
            s = expand(substitute(ui, sol.param), T, cap)
        except SeriesError:
            return False
        if s.terms != ((Fraction(1), Fraction(mi)),):
            return False
    return True


def positive_parameter(e: Expr, name: str = T) -> Expr:
    """Simplify powers of ``name`` assuming ``name > 0``: ``(t^12)^(1/4) = t^3``."""
    if isinstance(e, (Const, Var)):
        return e
    if isinstance(e, Add):
        return add(*(positive_parameter(s, name) for s in e.terms))
    if isinstance(e, Mul):
        return mul(*(positive_parameter(f, name) for f in e.factors))
    if isinstance(e, Pow):
        base = positive_parameter(e.base, name)
        if isinstance(base, Pow) and base.base == Var(name):
            return power(Var(name), base.exponent * e.exponent)
        if isinstance(base, Mul):
            return mul(*(positive_parameter(power(f, e.exponent), name) for f in base.factors))
        return power(base, e.exponent)
    if isinstance(e, Func):
        return func(e.name, positive_parameter(e.arg, name))
    return e


def reparameterize(param: Mapping[str, Expr], L: int) -> dict:
    """``t -> t^L``, then tidy exact Puiseux polynomials."""
    out = {}
    for x, e in param.items():
        e2 = positive_parameter(substitute(e, {T: power(Var(T), L)}))
        p = to_poly(e2)
        out[x] = from_poly(p) if p is not None else e2
    return out


@dataclass
class ProbeEntry:
    m: tuple
    branch: tuple  # ((variable, sign), ...)
    param: dict
    verdict: Verdict

    @property
    def value(self):
        v = self.verdict
        if v.is_exists:
            return v.value
        if v.is_dne and v.divergence:
            return math.inf * v.divergence
        return None


@dataclass
class CurveProbe:
    u: list
    used: tuple  # indices of u that define t
    steps: list
    conditions: list
    L: int
    table: list  # ProbeEntry
    identity_checked: bool = False
    notes: list = field(default_factory=list)

    def ratio_table(self) -> list:
        return [(e.m, e.branch, format_value(e.value) if e.value is not None else str(e.verdict))
                for e in self.table]

    def ratio_text(self) -> str:
        rows = []
        for m, branch, val in self.ratio_table():
            key = "(" + ", ".join(format_value(Fraction(x)) for x in m) + ")"
            if branch:
                key += " branch " + ",".join(f"{x}{'+' if b > 0 else '-'}" for x, b in branch)
            rows.append(f"m={key}: {val}")
        return "; ".join(rows)


def _probe_vectors(k: int, L: int, hint) -> list:
    if hint is not None:
        first = [tuple(Fraction(str(c)) for c in hint)]
    else:
        first = [tuple(Fraction(1) for _ in range(k))]
    bases = [
        tuple(range(1, k + 1)),
        tuple(range(k, 0, -1)),
        tuple([2, 3, 5, 7, 11, 13, 17, 19][:k]) if k <= 8 else tuple(range(2, k + 2)),
        tuple(3 if i == k - 1 else 1 for i in range(k)),
    ]
    out = list(first)
    for b in bases:
        m = tuple(Fraction(c) ** L for c in b)
        if m not in out:
            out.append(m)
    return out


def _sep(a, b) -> float:
    if a is None or b is None:
        return -1.0
    fa, fb = float(a), float(b)
    if math.isinf(fa) or math.isinf(fb):
        return math.inf if fa != fb else 0.0
    return abs(fa - fb)


def _subsets(u: Sequence[Expr], n: int, drop) -> list:
    if drop:
        idx = tuple(i for i in range(len(u)) if f"u{i + 1}" not in drop and i not in drop)
        return [idx]
    if len(u) == n:
        return [tuple(range(n))]
    if len(u) < n:
        return []
    return list(itertools.combinations(range(len(u)), n))


def curve_probe(problem: LimitProblem, u: Sequence[Expr], references: Sequence = (), drop=None, m_hint=None):
    """``(Verdict | None, CurveProbe | None, reason)`` for a problem at the origin.

    ``references`` are ``(Witness, value)`` pairs with known restricted
    limits (the axis paths), used as the second witness when they separate
    better than any other curve.
    """
    n = len(problem.variables)
    subsets = _subsets(u, n, drop)
    if not subsets:
        return None, None, f"{len(u)} squares cannot determine {n} variables"
    reasons = []
    zero_probe = None
    for used in subsets:
        us = [u[i] for i in used]
        try:
            dry = solve_triangular(us, problem.variables, [Fraction(1)] * len(us))
        except Unsolvable as exc:
            reasons.append(f"u{[i + 1 for i in used]}: {exc}")
            continue
        L = 1
        for st in dry.steps:
            L = math.lcm(L, st.k)
        even = [st.variable for st in dry.steps if st.k % 2 == 0]
        table = []
        checked = True
        for m in _probe_vectors(len(us), L, m_hint):
            for signs in itertools.product((1, -1), repeat=len(even)):
                branch = dict(zip(even, signs))
                try:
                    sol = solve_triangular(us, problem.variables, m, branch)
                except Unsolvable:
                    continue
                if not _branch_ok(sol):
                    continue
                checked = checked and verify_solution(us, sol, m)
                verdict = restricted_limit(problem.numerator, problem.denominator, sol.param)
                table.append(ProbeEntry(m, tuple(branch.items()), sol.param, verdict))
        probe = CurveProbe(list(u), used, dry.steps, dry.conditions, L, table, checked)
        if not checked:
            reasons.append("parameterization failed the u_i = m_i t identity")
            continue
        live = [e for e in table if e.value is not None]
        if not live:
            reasons.append("no restricted limit could be computed")
            continue
        values = {e.value for e in live}
        ref_values = {v for _, v in references}
        nonzero = any(v != 0 for v in values)
        if len(values) == 1 and not nonzero:
            zero_probe = probe
            continue
        if len(values) == 1 and not (values - ref_values) and not any(math.isinf(float(v)) for v in values):
            zero_probe = probe
            continue
        return _dne(problem, probe, live, references), probe, ""
    if zero_probe is not None:
        return None, zero_probe, "restricted limit is 0 for every probe"
    return None, None, "; ".join(reasons) or "no usable curve"


def _dne(problem, probe: CurveProbe, live, references) -> Verdict:
    first = live[0]
    others = [e for e in live[1:] if _sep(first.value, e.value) > MIN_SEPARATION]
    # simplest separating curve first, so witnesses stay readable
    best = min(others, key=lambda e: max(abs(c) for c in e.m), default=None)
    if best is None:
        best = max(live[1:], key=lambda e: _sep(first.value, e.value), default=None)
    best_sep = _sep(first.value, best.value) if best is not None else -1.0
    ref = max(references, key=lambda r: _sep(first.value, r[1]), default=None)
    ref_sep = _sep(first.value, ref[1]) if ref is not None else -1.0
    w1 = Witness(reparameterize(first.param, probe.L), first.value, f"curve m={_mtext(first.m)}")
    if best is not None and (best_sep > MIN_SEPARATION or best_sep >= ref_sep):
        w2 = Witness(reparameterize(best.param, probe.L), best.value, f"curve m={_mtext(best.m)}")
        why = "restricted limit depends on m" if best_sep > 0 else "restricted limit is unbounded"
    else:
        w2, why = ref[0], "curve limit differs from the axis limit"
    if any(math.isinf(float(e.value)) for e in live):
        why = "restricted limit is unbounded along a curve"
    cert = Certificate()
    cert.add(
        "step4-curve-probe",
        f"u = ({', '.join(map(str, probe.u))}), solved with u_{[i + 1 for i in probe.used]} = m t, "
        f"t -> t^{probe.L}; ratios {probe.ratio_text()}",
        f"{why}: {w1.describe()} gives {format_value(w1.limit)}, "
        f"{w2.describe()} gives {format_value(w2.limit)}",
    )
    return Verdict.does_not_exist([w1, w2], cert, reason=why, details={"curve_probe": probe})


def _mtext(m) -> str:
    return "(" + ", ".join(format_value(c) for c in m) + ")"
