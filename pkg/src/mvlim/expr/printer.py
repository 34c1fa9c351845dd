"""Canonical text rendering; output re-parses to the same tree."""

from __future__ import annotations

from fractions import Fraction

from .core import Add, Const, Expr, Func, Mul, Neg, Pow, Var, split_coeff


def _exponent(r: Fraction) -> str:
    if r.denominator == 1 and r > 0:
        return str(r.numerator)
    return f"({r.numerator}/{r.denominator})"


def _atom(e: Expr) -> str:
    """Render ``e`` so it can appear as a power base."""
    if isinstance(e, Var) or isinstance(e, Func):
        return to_string(e)
    if isinstance(e, Const) and e.value.denominator == 1 and e.value >= 0:
        return str(e.value.numerator)
    return f"({to_string(e)})"


def _factor(e: Expr) -> str:
    """Render ``e`` as an operand of ``*`` or ``/``."""
    if isinstance(e, (Add, Neg)) or (isinstance(e, Const) and e.value < 0):
        return f"({to_string(e)})"
    if isinstance(e, Mul):
        return f"({to_string(e)})"
    if isinstance(e, Const) and e.value.denominator != 1:
        return f"({to_string(e)})"
    return to_string(e)


def _render_product(coeff: Fraction, factors) -> str:
    num, den = [], []
    for f in factors:
        if isinstance(f, Pow) and f.exponent < 0:
            flipped = -f.exponent
            den.append(_atom(f.base) if flipped == 1 else f"{_atom(f.base)}^{_exponent(flipped)}")
        else:
            num.append(_factor(f))
    sign = "-" if coeff < 0 else ""
    c = abs(coeff)
    head = []
    if c.numerator != 1 or not num:
        head.append(str(c.numerator))
    head.extend(num)
    text = sign + "*".join(head)
    for d in den:
        text += "/" + d
    if c.denominator != 1:
        text += f"/{c.denominator}"
    return text


def to_string(e: Expr) -> str:
    if isinstance(e, Const):
        v = e.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Func):
        return f"{e.name}({to_string(e.arg)})"
    if isinstance(e, Neg):
        return f"-{_factor(e.arg)}"
    if isinstance(e, Pow):
        if e.exponent < 0:
            return _render_product(Fraction(1), (e,))
        return f"{_atom(e.base)}^{_exponent(e.exponent)}"
    if isinstance(e, Mul):
        coeff, rest = split_coeff(e)
        factors = rest.factors if isinstance(rest, Mul) else (rest,)
        return _render_product(coeff, factors)
    if isinstance(e, Add):
        parts = []
        for i, t in enumerate(e.terms):
            coeff, rest = split_coeff(t)
            negative = coeff < 0
            if rest is None:
                body = to_string(Const(abs(coeff)))
            else:
                factors = rest.factors if isinstance(rest, Mul) else (rest,)
                body = _render_product(abs(coeff), factors)
            if i == 0:
                parts.append(("-" if negative else "") + body)
            else:
                parts.append((" - " if negative else " + ") + body)
        return "".join(parts)
    raise TypeError(type(e))
