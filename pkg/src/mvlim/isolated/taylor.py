"""Replace function factors by their leading Taylor forms.

The numerator ``f`` becomes ``f~`` with ``f/f~ -> 1``.  A non-polynomial
denominator term ``g_k`` is either dropped, after proving ``g~_k/g_1 -> 0``
against the polynomial part ``g_1`` with a polar bound, or folded into
``g_1`` as ``g~_k`` when both are manifestly nonnegative.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..calculus import NotReducible, taylor_leading
from ..expr import (
    ZERO,
    Expr,
    add,
    additive_terms,
    distribute_constants,
    is_nonnegative,
    is_zero_expr,
    substitute,
    to_poly,
)
from ..verdict import Certificate, LimitProblem, Status
from .squares import enumerate_square_decompositions, polar_degree_bound


@dataclass
class TaylorReplacement:
    problem: LimitProblem
    approximations: list = field(default_factory=list)  # SeriesApprox
    certificate: Certificate = field(default_factory=Certificate)
    polar_certificates: list = field(default_factory=list)
    changed: bool = False
    notes: list = field(default_factory=list)


def _discharge(sa, cert: Certificate) -> None:
    """On the zero set of a monomial reduction both forms vanish, so they agree there."""
    p = to_poly(sa.reduction) if sa.reduction is not None else None
    if p is not None and len(p) == 1:
        (key,) = p
        names = [x for x, _ in key]
        ok = all(
            is_zero_expr(substitute(sa.original, {x: ZERO})) and is_zero_expr(substitute(sa.leading, {x: ZERO}))
            for x in names
        )
        if ok:
            cert.add(
                "taylor-replace",
                f"{sa.original} vs {sa.leading} on " + ", ".join(f"{x} = 0" for x in names),
                "both vanish there; the remaining finitely many domains are covered by the equivalence",
            )
            return
    cert.add("taylor-replace", f"{sa.original} vs {sa.leading} where {sa.reduction} = 0",
             "agreement on the exceptional set not checked", Status.ASSUMED)


def taylor_replace(problem: LimitProblem, max_decomps: int = 16) -> TaylorReplacement:
    """Problem at the origin; returns an equivalent polynomial problem when possible."""
    out = TaylorReplacement(problem)
    cert = out.certificate
    f, g = problem.numerator, problem.denominator
    new_f = f
    if to_poly(f) is None:
        try:
            sa = taylor_leading(f)
        except NotReducible as exc:
            out.notes.append(f"numerator kept: {exc}")
        else:
            new_f = sa.leading
            out.approximations.append(sa)
            cert.extend(sa.justification)
            cert.add("taylor-replace", f"numerator {f}", f"replace by {sa.leading} (ratio -> 1)")
            _discharge(sa, cert)
    terms = additive_terms(distribute_constants(g))
    poly_terms = [t for t in terms if to_poly(t) is not None]
    func_terms = [t for t in terms if to_poly(t) is None]
    g1 = add(*poly_terms) if poly_terms else ZERO
    folded = []
    for gk in func_terms:
        try:
            sa = taylor_leading(gk)
        except NotReducible as exc:
            out.notes.append(f"denominator term {gk} kept: {exc}")
            return _finish(out, problem, new_f, g)
        cert.extend(sa.justification)
        if is_nonnegative(sa.leading) and is_nonnegative(g1):
            folded.append(sa.leading)
            out.approximations.append(sa)
            cert.add("taylor-replace", f"denominator term {gk} ~ {sa.leading}",
                     "both parts are nonnegative, so the leading form can stand in for the term")
            _discharge(sa, cert)
            continue
        proved = False
        for dec in enumerate_square_decompositions(g1, problem.variables, max_decomps):
            verdict, pc, _ = polar_degree_bound(sa.leading, dec, problem.variables)
            if verdict is not None:
                out.polar_certificates.append(pc)
                out.approximations.append(sa)
                cert.extend(verdict.certificate)
                cert.add("taylor-replace", f"denominator term {gk} ~ {sa.leading}",
                         f"{sa.leading} / ({g1}) -> 0, so the term is negligible against {g1}")
                _discharge(sa, cert)
                proved = True
                break
        if not proved:
            out.notes.append(f"could not show {sa.leading} is negligible against {g1}")
            return _finish(out, problem, new_f, g)
    new_g = add(g1, *folded) if func_terms else g
    return _finish(out, problem, new_f, new_g)


def _finish(out: TaylorReplacement, problem: LimitProblem, f: Expr, g: Expr) -> TaylorReplacement:
    if f != problem.numerator or g != problem.denominator:
        out.problem = LimitProblem(f, g, problem.variables, problem.point)
        out.changed = True
    return out
