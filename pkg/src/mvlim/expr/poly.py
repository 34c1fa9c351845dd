"""Sparse multivariate polynomials with rational exponents.

A polynomial is a ``dict`` from an exponent key (sorted tuple of
``(variable, exponent)`` pairs, zero exponents omitted) to a nonzero
``Fraction`` coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .core import (
    Add,
    Const,
    Expr,
    Func,
    Mul,
    Neg,
    Pow,
    Var,
    add,
    can_merge_sum,
    mul,
    power,
    rational_power,
)

Key = tuple  # tuple[tuple[str, Fraction], ...]
Poly = dict  # dict[Key, Fraction]


@dataclass(frozen=True)
class Monomial:
    coefficient: Fraction
    powers: tuple  # sorted ((name, exponent), ...)

    @property
    def exponents(self) -> dict[str, Fraction]:
        return dict(self.powers)

    def degree(self) -> Fraction:
        return sum((e for _, e in self.powers), Fraction(0))

    def to_expr(self) -> Expr:
        return mul(self.coefficient, *(power(Var(v), e) for v, e in self.powers))

    def __str__(self):
        return str(self.to_expr())


class NotPolynomial(ValueError):
    pass


def _mul_keys(a: Key, b: Key) -> Key:
    if not a:
        return b
    if not b:
        return a
    merged = dict(a)
    for v, e in b:
        if v in merged:
            old = merged[v]
            if not can_merge_sum(old, e):
                raise NotPolynomial("sign convention prevents merging powers")
            new = old + e
            if new == 0:
                del merged[v]
            else:
                merged[v] = new
        else:
            merged[v] = e
    return tuple(sorted(merged.items()))


def poly_add(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for k, c in b.items():
        s = out.get(k, 0) + c
        if s == 0:
            out.pop(k, None)
        else:
            out[k] = s
    return out


def poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = _mul_keys(ka, kb)
            s = out.get(k, 0) + ca * cb
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
    return out


def poly_scale(a: Poly, c: Fraction) -> Poly:
    if c == 0:
        return {}
    return {k: v * c for k, v in a.items()}


def _to_poly(e: Expr) -> Poly:
    if isinstance(e, Const):
        return {(): e.value} if e.value != 0 else {}
    if isinstance(e, Var):
        return {((e.name, Fraction(1)),): Fraction(1)}
    if isinstance(e, Add):
        acc: Poly = {}
        for t in e.terms:
            acc = poly_add(acc, _to_poly(t))
        return acc
    if isinstance(e, Mul):
        acc = {(): Fraction(1)}
        for f in e.factors:
            acc = poly_mul(acc, _to_poly(f))
        return acc
    if isinstance(e, Neg):
        return poly_scale(_to_poly(e.arg), Fraction(-1))
    if isinstance(e, Pow):
        r = e.exponent
        if isinstance(e.base, Var):
            if r < 0:
                raise NotPolynomial("negative exponent")
            return {((e.base.name, r),): Fraction(1)}
        if isinstance(e.base, Const):
            val = rational_power(e.base.value, r)
            if val is None:
                raise NotPolynomial("irrational constant")
            return {(): val} if val else {}
        if r.denominator != 1 or r < 0:
            raise NotPolynomial("non-integer power of a compound base")
        base = _to_poly(e.base)
        out = {(): Fraction(1)}
        n = r.numerator
        while n:
            if n & 1:
                out = poly_mul(out, base)
            n >>= 1
            if n:
                base = poly_mul(base, base)
        return out
    if isinstance(e, Func):
        raise NotPolynomial(f"function {e.name}")
    raise TypeError(type(e))


def to_poly(e: Expr) -> Poly | None:
    try:
        return _to_poly(e)
    except NotPolynomial:
        return None


def _key_sort(item):
    key, _ = item
    return tuple((v, -x) for v, x in key)


def as_polynomial(e: Expr) -> list[Monomial] | None:
    """Expanded monomial list of ``e``, or None if ``e`` is not polynomial."""
    p = to_poly(e)
    if p is None:
        return None
    return [Monomial(c, k) for k, c in sorted(p.items(), key=_key_sort)]


def from_poly(p: Poly) -> Expr:
    return add(*(mul(c, *(power(Var(v), x) for v, x in k)) for k, c in p.items()))


def from_monomials(monos) -> Expr:
    return add(*(m.to_expr() for m in monos))


def evaluate_monomials(monos, at: Mapping[str, float]) -> float:
    from .evaluate import _real_pow_float

    total = 0.0
    for m in monos:
        term = float(m.coefficient)
        for v, x in m.powers:
            term *= _real_pow_float(float(at[v]), x)
        total += term
    return total


def total_degree(p: Poly) -> Fraction:
    return max((sum((x for _, x in k), Fraction(0)) for k in p), default=Fraction(0))


def is_zero_expr(e: Expr) -> bool | None:
    """True/False when decidable by expansion, None otherwise."""
    if isinstance(e, Const):
        return e.value == 0
    p = to_poly(e)
    if p is None:
        return None
    return not p
