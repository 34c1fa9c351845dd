from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from ..expr import (
    ZERO,
    Add,
    Const,
    Expr,
    Func,
    Mul,
    Neg,
    Pow,
    Var,
    add,
    func,
    mul,
    power,
)


def differentiate(e: Expr, name: str) -> Expr:
    """Exact partial derivative of ``e`` with respect to ``name``."""
    cache: dict[Expr, Expr] = {}

    def d(node: Expr) -> Expr:
        hit = cache.get(node)
        if hit is not None:
            return hit
        out = _d(node, d, name)
        cache[node] = out
        return out

    return d(e)


def _d(e: Expr, d, name: str) -> Expr:
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return Const(1) if e.name == name else ZERO
    if isinstance(e, Add):
        return add(*(d(t) for t in e.terms))
    if isinstance(e, Neg):
        return mul(-1, d(e.arg))
    if isinstance(e, Mul):
        parts = []
        fs = e.factors
        for i, f in enumerate(fs):
            df = d(f)
            if df == ZERO:
                continue
            parts.append(mul(*fs[:i], df, *fs[i + 1:]))
        return add(*parts)
    if isinstance(e, Pow):
        db = d(e.base)
        if db == ZERO:
            return ZERO
        r = e.exponent
        if r.denominator % 2 == 0:
            # |u|^r has derivative r * u * |u|^(r-2)
            return mul(r, e.base, power(e.base, r - 2), db)
        return mul(r, power(e.base, r - 1), db)
    if isinstance(e, Func):
        u = e.arg
        du = d(u)
        if du == ZERO:
            return ZERO
        n = e.name
        if n == "sin":
            outer = func("cos", u)
        elif n == "cos":
            outer = mul(-1, func("sin", u))
        elif n == "tan":
            outer = power(func("sec", u), 2)
        elif n == "sec":
            outer = mul(func("sec", u), func("tan", u))
        elif n == "exp":
            outer = e
        elif n == "sqrt":
            outer = mul(Fraction(1, 2), power(e, -1))
        elif n == "abs":
            outer = mul(u, power(e, -1))
        else:
            raise ValueError(n)
        return mul(outer, du)
    raise TypeError(type(e))


def directional_derivative(e: Expr, direction: Sequence, variables: Sequence[str]) -> Expr:
    """``sum_j v_j * de/dx_j`` over the ordered ``variables``."""
    v = [Fraction(c) for c in direction]
    if len(v) != len(variables):
        raise ValueError("direction and variable list differ in length")
    if all(c == 0 for c in v):
        raise ValueError("zero direction vector")
    return add(*(mul(c, differentiate(e, x)) for c, x in zip(v, variables) if c != 0))


def gradient(e: Expr, variables: Sequence[str]) -> list[Expr]:
    return [differentiate(e, x) for x in variables]


def primitive_direction(direction: Sequence) -> tuple[Fraction, ...]:
    """Scale a rational vector to coprime integers with first nonzero entry positive."""
    from math import gcd, lcm

    v = [Fraction(c) for c in direction]
    den = 1
    for c in v:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in v]
    g = 0
    for i in ints:
        g = gcd(g, i)
    if g == 0:
        raise ValueError("zero direction vector")
    first = next(i for i in ints if i != 0)
    s = 1 if first > 0 else -1
    return tuple(Fraction(s * i // g) for i in ints)
