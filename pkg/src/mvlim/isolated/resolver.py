"""Orchestration of the isolated-point algorithm."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Sequence

from ..calculus import restricted_limit
from ..expr import ZERO, add, mul, parse, power, to_origin, to_poly
from ..verdict import Certificate, LimitProblem, Status, Verdict, Witness, format_value
from .curve import curve_probe
from .squares import (
    UNKNOWN,
    SquareDecomposition,
    classify_residual,
    enumerate_square_decompositions,
    identity_holds,
    polar_degree_bound,
)
from .steps import preliminary_probe, separate
from .taylor import taylor_replace

DEFAULT_BUDGET = 16


def parse_hints(data, variables: Sequence[str], point: Mapping | None = None) -> list:
    """Decomposition hints from JSON: one object or a list of objects."""
    if data is None:
        return []
    items = data if isinstance(data, list) else [data]
    out = []
    for h in items:
        if "u" not in h:
            raise ValueError("decomposition hint needs a 'u' list")
        u = [parse(str(s)) for s in h["u"]]
        v = parse(str(h["v"])) if h.get("v") is not None else None
        if point:
            u = [to_origin(x, point) for x in u]
            v = to_origin(v, point) if v is not None else None
        dec = SquareDecomposition(u, v if v is not None else ZERO, source="hint",
                                  drop=list(h.get("drop", [])), m=h.get("m"))
        dec.v_given = v is not None
        out.append(dec)
    return out


def _complete_hint(dec: SquareDecomposition, g, variables) -> SquareDecomposition | None:
    if not getattr(dec, "v_given", True):
        dec.v = add(g, *(mul(-1, power(ui, 2)) for ui in dec.u))
    if not identity_holds(dec, g):
        # accept a positive multiple of the denominator
        pg, pd = to_poly(g), to_poly(dec.rebuilt())
        if not pg or not pd:
            return None
        key = next(iter(pd))
        c = pg.get(key, Fraction(0)) / pd[key]
        if c <= 0:
            return None
        dec.weights = [w * c for w in dec.weights]
        dec.v = mul(c, dec.v)
        if not identity_holds(dec, g):
            return None
    dec.residual_class, _ = classify_residual(dec.v, dec.exponent_vectors(variables), variables)
    return dec


def _limit_value(v: Verdict):
    if v.is_exists:
        return v.value
    if v.is_dne and v.divergence:
        return "+inf" if v.divergence > 0 else "-inf"
    return None


def _finalize_dne(original: LimitProblem, verdict: Verdict, cert: Certificate) -> Verdict:
    """Move witnesses back to the original point and re-check them exactly."""
    pm = original.point_map
    checked = []
    for w in verdict.witnesses:
        path = {x: add(pm[x], w.path.get(x, ZERO)) for x in original.variables}
        lim = restricted_limit(original.numerator, original.denominator, path)
        value = _limit_value(lim)
        checked.append(Witness(path, value if value is not None else w.limit, w.label))
    cert.extend(verdict.certificate)
    if len(checked) >= 2 and checked[0].limit is not None and checked[1].limit is not None:
        a, b = checked[0].limit, checked[1].limit
        if a == b:
            return Verdict.inconclusive("witness paths agree on the original problem", cert)
        cert.add(
            "witness-check",
            f"{checked[0].describe()} | {checked[1].describe()}",
            f"restricted limits {format_value(a)} and {format_value(b)} differ",
        )
    return Verdict.does_not_exist(checked, cert, reason=verdict.reason, details=verdict.details)


def resolve_isolated(problem: LimitProblem, hints=None, max_decomps: int = DEFAULT_BUDGET) -> Verdict:
    """Steps 1-5 with Taylor replacement; first conclusive decomposition wins."""
    original = problem
    work = problem.translated()
    variables = work.variables
    cert = Certificate()
    attempts: list = []
    polar_certs: list = []
    details = {"attempts": attempts, "polar": polar_certs}
    if work.numerator == ZERO:
        cert.add("zero-numerator", "numerator is 0", "quotient is identically 0")
        return Verdict.exists(Fraction(0), cert, details=details)

    probe = preliminary_probe(work)
    details["probe"] = probe
    if probe.verdict is not None:
        return _finalize_dne(original, probe.verdict, cert)
    cert.extend(probe.certificate)
    ell = probe.shift or Fraction(0)
    if probe.shift is not None:
        work = work.with_numerator(probe.shifted_numerator)
    details["shift"] = probe.shift

    def done(v: Verdict) -> Verdict:
        cert.extend(v.certificate)
        if ell:
            cert.add("un-shift", f"limit of shifted quotient is {format_value(v.value)}",
                     f"original limit is {format_value(ell)} + {format_value(v.value)} = {format_value(ell + v.value)}")
        return Verdict.exists(ell + v.value, cert, details=details)

    sep = separate(work)
    if sep is not None:
        return done(sep)

    tr = taylor_replace(work, max_decomps)
    details["taylor"] = tr
    cert.extend(tr.certificate)
    polar_certs.extend(tr.polar_certificates)
    target = tr.problem
    decs: list = []
    for dec in parse_hints(hints, variables, original.point_map if not original.at_origin else None):
        full = _complete_hint(dec, work.denominator, variables)
        if full is None:
            full = _complete_hint(dec, target.denominator, variables)
        if full is None:
            attempts.append({"decomposition": dec.describe(), "outcome": "rejected",
                             "reason": "hint does not reproduce the denominator"})
            continue
        decs.append(full)
    if to_poly(target.denominator) is not None:
        decs.extend(enumerate_square_decompositions(target.denominator, variables, max_decomps))
    if not decs:
        cert.add("step3-squares", str(target.denominator), "no sum-of-squares decomposition available",
                 Status.ASSUMED)
        return Verdict.inconclusive("no sum-of-squares decomposition of the denominator", cert, details=details)

    refs = probe.references(work)
    for dec in decs[:max_decomps]:
        entry = {"decomposition": dec.describe(), "residual": dec.residual_class, "source": dec.source}
        attempts.append(entry)
        verdict, cp, why = curve_probe(work, dec.u, refs, dec.drop or None, dec.m)
        if verdict is not None:
            entry.update(outcome="does_not_exist", reason=verdict.reason)
            cert.add("step3-squares", dec.describe(), "decomposition identity holds exactly")
            return _finalize_dne(original, verdict, cert)
        entry["curve_probe"] = why
        if not identity_holds(dec, target.denominator):
            entry.update(outcome="skipped", reason="not a decomposition of the replaced denominator")
            continue
        if dec.residual_class == UNKNOWN:
            entry.update(outcome="rejected", reason="residual has mixed sign and LP degree <= 2")
            continue
        pv, pc, reason = polar_degree_bound(target.numerator, dec, variables)
        if pc is not None:
            polar_certs.append(pc)
        if pv is None:
            entry.update(outcome="rejected", reason=reason, alpha=pc.alpha_min if pc else None)
            cert.add("step5-polar-bound", dec.describe(), f"inconclusive for this decomposition: {reason}")
            continue
        entry.update(outcome="exists", alpha=pc.alpha_min)
        cert.add("step3-squares", dec.describe(),
                 f"decomposition identity holds exactly; residual {dec.residual_class}")
        if cp is not None:
            cert.add("step4-curve-probe", f"u = ({', '.join(map(str, dec.u))})",
                     "restricted limit is 0 for every probe vector")
        return done(pv)
    return Verdict.inconclusive("every decomposition was inconclusive", cert, details=details)
