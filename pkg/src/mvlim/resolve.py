"""Route a limit problem to the right resolver."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from scipy.stats import qmc

from .calculus import two_sided_limit, univariate_limit
from .expr import (
    ZERO,
    Var,
    add,
    evaluate,
    evaluate_array,
    exact_value,
    is_defined,
    is_zero_expr,
    mul,
    substitute,
)
from .isolated import resolve_isolated
from .transversal import ZeroSetSpec, detect_zero_set, resolve_nonisolated
from .verdict import Certificate, LimitProblem, Verdict, Witness, format_value

MODES = ("auto", "nonisolated", "isolated")
ROUTING_RADIUS = Fraction(1, 8)
ROUTING_SAMPLES = 4096


def _float_point(problem: LimitProblem) -> dict:
    return {x: float(c) for x, c in zip(problem.variables, problem.point)}


def denominator_vanishes_nearby(problem: LimitProblem, seed: int = 0) -> str | None:
    """Sampled evidence that ``g`` has zeros in the punctured ball; None if none found."""
    n = len(problem.variables)
    raw = qmc.Halton(d=n, scramble=True, seed=seed).random(ROUTING_SAMPLES)
    r = float(ROUTING_RADIUS)
    off = (2 * raw - 1) * r
    norms = np.linalg.norm(off, axis=1)
    off = off[(norms <= r) & (norms > 0)]
    cols = {x: off[:, i] + float(c) for i, (x, c) in enumerate(zip(problem.variables, problem.point))}
    g = np.broadcast_to(evaluate_array(problem.denominator, cols), (len(off),))
    g = g[np.isfinite(g)]
    if np.any(g == 0):
        return "denominator vanishes at a sampled point"
    if np.any(g > 0) and np.any(g < 0):
        return "denominator changes sign near the point"
    return None


def _continuity(problem: LimitProblem) -> Verdict | None:
    pm = problem.point_map
    gv = exact_value(problem.denominator, pm)
    fv = exact_value(problem.numerator, pm)
    cert = Certificate()
    if gv is not None and gv != 0:
        if fv is not None:
            cert.add("continuity", problem.describe(), f"denominator is {format_value(gv)} != 0; value {format_value(fv / gv)}")
            return Verdict.exists(fv / gv, cert)
    if gv is None:
        gf = evaluate(problem.denominator, _float_point(problem))
        if not is_defined(gf) or gf == 0:
            return None
    else:
        gf = float(gv)
        if gv == 0:
            return None
    ff = evaluate(problem.numerator, _float_point(problem))
    if not is_defined(ff):
        return Verdict.inconclusive("numerator undefined at the point")
    cert.add("continuity", problem.describe(), f"denominator is nonzero at the point; value {ff / gf!r}")
    return Verdict.exists(ff / gf, cert)


def _nonzero_over_zero(problem: LimitProblem) -> Verdict | None:
    """``f(p) != 0 = g(p)``: the quotient is unbounded."""
    pm = problem.point_map
    fv = exact_value(problem.numerator, pm)
    if fv is None:
        ff = evaluate(problem.numerator, _float_point(problem))
        if not is_defined(ff) or ff == 0:
            return None
    elif fv == 0:
        return None
    cert = Certificate()
    t = Var("t")
    witnesses = []
    for x in problem.variables:
        path = {y: (add(pm[y], t) if y == x else pm[y]) for y in problem.variables}
        v = univariate_limit(substitute(problem.numerator, path), substitute(problem.denominator, path), "t")
        if v.is_dne and v.divergence:
            witnesses.append(Witness(path, "+inf" if v.divergence > 0 else "-inf", f"{x}-axis"))
            cert.extend(v.certificate)
            break
    cert.add("nonzero-over-zero", problem.describe(),
             f"numerator tends to {format_value(fv) if fv is not None else 'a nonzero value'} while the denominator tends to 0")
    return Verdict.does_not_exist(witnesses, cert, reason="unbounded")


def resolve(problem: LimitProblem, mode: str = "auto", zero_set: ZeroSetSpec | None = None,
            hints=None, max_decomps: int = 16, seed: int = 0, depth: int = 0) -> Verdict:
    """Limit of ``numerator/denominator`` at ``point``."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    cont = _continuity(problem)
    if cont is not None:
        return cont
    if is_zero_expr(problem.numerator) or problem.numerator == ZERO:
        cert = Certificate()
        cert.add("zero-numerator", problem.describe(), "numerator is identically 0")
        return Verdict.exists(Fraction(0), cert)
    nz = _nonzero_over_zero(problem)
    if nz is not None:
        return nz
    if len(problem.variables) == 1:
        (x,) = problem.variables
        p = problem.translated()
        return two_sided_limit(p.numerator, p.denominator, x)

    def recurse(sub: LimitProblem, d: int) -> Verdict:
        return resolve(sub, "auto", None, None, max_decomps, seed, d)

    if mode == "nonisolated" or zero_set is not None:
        return resolve_nonisolated(problem, zero_set, depth, seed, recurse)
    if mode == "isolated":
        return resolve_isolated(problem, hints, max_decomps)
    spec = detect_zero_set(problem.denominator, problem.variables, problem.point_map)
    if spec is not None:
        return resolve_nonisolated(problem, spec, depth, seed, recurse)
    if hints is None:
        why = denominator_vanishes_nearby(problem, seed)
        if why is not None:
            return Verdict.inconclusive(f"{why}, but its zero set was not recognised; supply one")
    return resolve_isolated(problem, hints, max_decomps)
