"""Sum-of-squares readings of a polynomial denominator and the polar degree bound.

A decomposition writes ``g = sum_i w_i u_i^2 + v`` with positive weights
``w_i``.  Weights change nothing below: ``g >= min(w) * rho^2`` with
``rho^2 = sum u_i^2`` once the residual is handled.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..expr import (
    Expr,
    add,
    from_poly,
    mul,
    power,
    sign_parity,
    to_poly,
)
from ..lp import LPInfeasible, maximize
from ..verdict import Certificate, Verdict

NONNEGATIVE = "nonnegative"
DEGREE_BOUNDED = "degree-bounded"
UNKNOWN = "unknown"


def _is_even_monomial(key) -> bool:
    return all(sign_parity(e) == 0 for _, e in key)


@dataclass
class SquareDecomposition:
    u: list  # Exprs
    v: Expr
    weights: list = field(default_factory=list)  # positive rationals, default all 1
    residual_class: str = UNKNOWN
    source: str = "enumerated"  # or "hint"
    drop: list = field(default_factory=list)  # curve-probe overrides
    m: list | None = None

    def __post_init__(self):
        if not self.weights:
            self.weights = [Fraction(1)] * len(self.u)

    def rebuilt(self) -> Expr:
        return add(*(mul(w, power(ui, 2)) for w, ui in zip(self.weights, self.u)), self.v)

    def describe(self) -> str:
        sq = " + ".join(
            (f"{w}*" if w != 1 else "") + f"({ui})^2" for w, ui in zip(self.weights, self.u)
        )
        return f"u = ({', '.join(map(str, self.u))}), v = {self.v}" + (f"; {sq}" if any(w != 1 for w in self.weights) else "")

    def exponent_vectors(self, variables: Sequence[str]) -> list | None:
        out = []
        for ui in self.u:
            p = to_poly(ui)
            if p is None or len(p) != 1:
                return None
            (key,) = p
            d = dict(key)
            out.append([d.get(x, Fraction(0)) for x in variables])
        return out


def identity_holds(dec: SquareDecomposition, g: Expr) -> bool:
    """``sum w_i u_i^2 + v - g`` is the zero polynomial."""
    diff = to_poly(add(dec.rebuilt(), mul(-1, g)))
    return diff is not None and not diff


def _lp_degree(exponents: Sequence[Fraction], w: Sequence[Sequence[Fraction]]):
    """Largest ``sum c`` with ``sum c_i w_i <= exponents``; None if infeasible."""
    if not w:
        return None
    A = [[w[i][r] for i in range(len(w))] for r in range(len(exponents))]
    try:
        res = maximize([1] * len(w), A, list(exponents))
    except LPInfeasible:
        return None
    return res


def classify_residual(v: Expr, w, variables) -> tuple[str, list]:
    """``(class, per-term notes)``.  Nonnegative terms drop; others need LP degree > 2."""
    p = to_poly(v)
    if p is None:
        return UNKNOWN, ["residual is not polynomial"]
    if not p:
        return NONNEGATIVE, []
    cls = NONNEGATIVE
    notes = []
    for key, c in sorted(p.items()):
        if c > 0 and _is_even_monomial(key):
            notes.append((key, c, "dropped", None))
            continue
        if w is None:
            return UNKNOWN, notes + [(key, c, "no monomial squares to bound against", None)]
        d = dict(key)
        res = _lp_degree([d.get(x, Fraction(0)) for x in variables], w)
        if res is None or res.value <= 2:
            notes.append((key, c, "degree too small", None if res is None else res.value))
            return UNKNOWN, notes
        notes.append((key, c, "degree-bounded", res.value))
        cls = DEGREE_BOUNDED
    return cls, notes


def square_candidates(g: Expr) -> list:
    """``(u, weight, term key)`` for each positive term that is a monomial square."""
    p = to_poly(g)
    if p is None:
        return []
    out = []
    for key, c in sorted(p.items()):
        if c > 0 and key and _is_even_monomial(key):
            u = from_poly({tuple((x, e / 2) for x, e in key): Fraction(1)})
            if to_poly(power(u, 2)) == {key: Fraction(1)}:
                out.append((u, c, key))
    return out


def enumerate_square_decompositions(g: Expr, variables: Sequence[str], limit: int = 16) -> list:
    """Monomial square decompositions of a polynomial ``g``.

    Ordered by number of squares, then total degree of the squares
    (largest first), then fewer residual terms.  Decompositions whose
    residual cannot be handled are still emitted with class ``unknown``.
    """
    p = to_poly(g)
    if p is None:
        return []
    cands = square_candidates(g)
    scored = []
    for k in range(2, len(cands) + 1):
        for combo in itertools.combinations(cands, k):
            used = {key for _, _, key in combo}
            rest = {key: c for key, c in p.items() if key not in used}
            degree = sum(sum(e for _, e in key) for _, _, key in combo)
            scored.append((k, -degree, len(rest), combo, rest))
    scored.sort(key=lambda s: s[:3])
    out = []
    for _, _, _, combo, rest in scored[:limit]:
        dec = SquareDecomposition(
            [u for u, _, _ in combo], from_poly(rest), [c for _, c, _ in combo]
        )
        dec.residual_class, _ = classify_residual(dec.v, dec.exponent_vectors(variables), variables)
        out.append(dec)
    return out


# ---------------------------------------------------------------- polar bound


@dataclass
class TermBound:
    term: Expr
    exponents: tuple
    c: tuple
    alpha: Fraction
    leftover: tuple  # exponents of the bounded leftover factor


@dataclass
class PolarBoundCertificate:
    variables: tuple
    u: list
    u_exponents: list
    terms: list  # TermBound
    alpha_min: Fraction
    residual: str  # "dropped-nonnegative" or "degree-bound alpha_v=..."
    residual_terms: list = field(default_factory=list)
    angular: list = field(default_factory=list)

    def replay(self) -> bool:
        """Re-check every LP witness with exact arithmetic."""
        alphas = []
        for tb in self.terms:
            if any(ci < 0 for ci in tb.c):
                return False
            for r in range(len(self.variables)):
                used = sum(ci * w[r] for ci, w in zip(tb.c, self.u_exponents))
                if used > tb.exponents[r] or tb.exponents[r] - used != tb.leftover[r]:
                    return False
            if sum(tb.c) != tb.alpha or tb.alpha <= 2:
                return False
            alphas.append(tb.alpha)
        for _, alpha in self.residual_terms:
            if alpha <= 2:
                return False
        return bool(alphas) and min(alphas) == self.alpha_min and self.alpha_min > 2

    def summary(self) -> str:
        parts = [f"{tb.term}: alpha = {tb.alpha} (c = {', '.join(map(str, tb.c))})" for tb in self.terms]
        return "; ".join(parts)


def polar_bound_terms(num_poly: dict, dec: SquareDecomposition, variables: Sequence[str]):
    """LP bound per numerator term: ``(list of TermBound | None, reason)``."""
    w = dec.exponent_vectors(variables)
    if w is None:
        return None, "squares are not monomials"
    bounds = []
    for key, coeff in sorted(num_poly.items()):
        d = dict(key)
        e = tuple(d.get(x, Fraction(0)) for x in variables)
        res = _lp_degree(e, w)
        term = from_poly({key: coeff})
        if res is None:
            return None, f"term {term} is not expressible in the squares"
        left = tuple(e[r] - sum(ci * wi[r] for ci, wi in zip(res.x, w)) for r in range(len(variables)))
        bounds.append(TermBound(term, e, res.x, res.value, left))
    return bounds, ""


def polar_degree_bound(num: Expr, dec: SquareDecomposition, variables: Sequence[str]):
    """``(Verdict | None, PolarBoundCertificate | None, reason)`` for ``num / g`` at the origin."""
    p = to_poly(num)
    if p is None:
        return None, None, "numerator is not polynomial"
    if not p:
        return None, None, "numerator is zero"
    if dec.residual_class == UNKNOWN:
        return None, None, "residual has mixed sign and small degree"
    bounds, why = polar_bound_terms(p, dec, variables)
    if bounds is None:
        return None, None, why
    alpha_min = min(tb.alpha for tb in bounds)
    w = dec.exponent_vectors(variables)
    _, notes = classify_residual(dec.v, w, variables)
    residual_terms = [(from_poly({key: c}), a) for key, c, kind, a in notes if kind == "degree-bounded"]
    if dec.residual_class == NONNEGATIVE:
        residual = "dropped-nonnegative"
    else:
        residual = f"degree-bound alpha_v = {min(a for _, a in residual_terms)}"
    angular = [
        f"{tb.term} = rho^{tb.alpha} * bounded (leftover exponents {', '.join(map(str, tb.leftover))})"
        for tb in bounds
    ]
    cert = PolarBoundCertificate(
        tuple(variables), list(dec.u), w, bounds, alpha_min, residual, residual_terms, angular
    )
    worst = min(bounds, key=lambda tb: tb.alpha)
    if alpha_min <= 2:
        return None, cert, f"alpha = {alpha_min} <= 2 for term {worst.term}"
    c = Certificate()
    c.add(
        "step5-polar-bound",
        f"{dec.describe()}; {cert.summary()}",
        f"alpha_min = {alpha_min} > 2, residual {residual}: |num/den| <= C rho^{alpha_min - 2} -> 0",
    )
    return Verdict.exists(Fraction(0), c), cert, ""
