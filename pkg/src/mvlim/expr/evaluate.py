"""Numerical and exact evaluation of expression trees."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping

import mpmath
import numpy as np

from .core import Add, Const, Expr, Func, Mul, Neg, Pow, Var, rational_power


class _Undefined:
    """Marker for values that are not defined (0/0, sqrt of a negative...)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNDEFINED"

    def __bool__(self):
        return False


UNDEFINED = _Undefined()


def is_defined(v) -> bool:
    """True for a finite real value, False for UNDEFINED, None, inf or nan."""
    if v is None or v is UNDEFINED:
        return False
    try:
        return math.isfinite(v)
    except TypeError:
        return False


class UnassignedVariable(KeyError):
    pass


def _lookup(env: Mapping, name: str):
    try:
        return env[name]
    except KeyError:
        raise UnassignedVariable(name) from None


def _real_pow_float(x: float, r: Fraction):
    if r.denominator == 1:
        n = r.numerator
        if x == 0 and n < 0:
            return UNDEFINED
        try:
            return x**n
        except OverflowError:
            return math.inf
        except ZeroDivisionError:
            return UNDEFINED
    if x == 0:
        return UNDEFINED if r < 0 else 0.0
    try:
        mag = abs(x) ** float(r)
    except OverflowError:
        return math.inf
    if x < 0 and r.denominator % 2 == 1 and r.numerator % 2 == 1:
        return -mag
    return mag


def evaluate(e: Expr, at: Mapping[str, float]):
    """Evaluate in IEEE double precision; returns a float or ``UNDEFINED``."""
    if isinstance(e, Const):
        return float(e.value)
    if isinstance(e, Var):
        return float(_lookup(at, e.name))
    if isinstance(e, Add):
        total = 0.0
        for t in e.terms:
            v = evaluate(t, at)
            if v is UNDEFINED:
                return UNDEFINED
            total += v
        return total
    if isinstance(e, Mul):
        prod = 1.0
        for f in e.factors:
            v = evaluate(f, at)
            if v is UNDEFINED:
                return UNDEFINED
            prod *= v
        return prod
    if isinstance(e, Neg):
        v = evaluate(e.arg, at)
        return UNDEFINED if v is UNDEFINED else -v
    if isinstance(e, Pow):
        b = evaluate(e.base, at)
        if b is UNDEFINED:
            return UNDEFINED
        return _real_pow_float(b, e.exponent)
    if isinstance(e, Func):
        a = evaluate(e.arg, at)
        if a is UNDEFINED:
            return UNDEFINED
        return _func_float(e.name, a)
    raise TypeError(type(e))


def _func_float(name: str, a: float):
    if math.isnan(a):
        return UNDEFINED
    try:
        if name == "sin":
            return math.sin(a)
        if name == "cos":
            return math.cos(a)
        if name == "tan":
            return math.tan(a)
        if name == "sec":
            c = math.cos(a)
            return UNDEFINED if c == 0 else 1.0 / c
        if name == "exp":
            return math.exp(a)
        if name == "sqrt":
            return UNDEFINED if a < 0 else math.sqrt(a)
        if name == "abs":
            return abs(a)
    except OverflowError:
        return math.inf
    except ValueError:
        return UNDEFINED
    raise ValueError(name)


def evaluate_mp(e: Expr, at: Mapping, dps: int = 50):
    """Evaluate with mpmath at ``dps`` decimal digits; returns mpf or ``UNDEFINED``."""
    with mpmath.workdps(dps):
        return _eval_mp(e, {k: mpmath.mpf(v) if not isinstance(v, Fraction)
                            else mpmath.mpf(v.numerator) / v.denominator
                            for k, v in at.items()})


def _eval_mp(e: Expr, at):
    if isinstance(e, Const):
        return mpmath.mpf(e.value.numerator) / e.value.denominator
    if isinstance(e, Var):
        return _lookup(at, e.name)
    if isinstance(e, (Add, Mul)):
        parts = e.terms if isinstance(e, Add) else e.factors
        acc = mpmath.mpf(0 if isinstance(e, Add) else 1)
        for p in parts:
            v = _eval_mp(p, at)
            if v is UNDEFINED:
                return UNDEFINED
            acc = acc + v if isinstance(e, Add) else acc * v
        return acc
    if isinstance(e, Neg):
        v = _eval_mp(e.arg, at)
        return UNDEFINED if v is UNDEFINED else -v
    if isinstance(e, Pow):
        b = _eval_mp(e.base, at)
        if b is UNDEFINED:
            return UNDEFINED
        r = e.exponent
        if b == 0:
            return UNDEFINED if r < 0 else mpmath.mpf(0)
        if r.denominator == 1:
            return b**r.numerator
        mag = abs(b) ** (mpmath.mpf(r.numerator) / r.denominator)
        if b < 0 and r.denominator % 2 == 1 and r.numerator % 2 == 1:
            return -mag
        return mag
    if isinstance(e, Func):
        a = _eval_mp(e.arg, at)
        if a is UNDEFINED:
            return UNDEFINED
        name = e.name
        if name == "sqrt":
            return UNDEFINED if a < 0 else mpmath.sqrt(a)
        if name == "sec":
            c = mpmath.cos(a)
            return UNDEFINED if c == 0 else 1 / c
        return getattr(mpmath, "fabs" if name == "abs" else name)(a)
    raise TypeError(type(e))


def evaluate_array(e: Expr, at: Mapping[str, np.ndarray]) -> np.ndarray:
    """Vectorized float evaluation; undefined entries become NaN."""
    with np.errstate(all="ignore"):
        return np.asarray(_eval_np(e, at), dtype=float)


def _eval_np(e: Expr, at):
    if isinstance(e, Const):
        return float(e.value)
    if isinstance(e, Var):
        return np.asarray(_lookup(at, e.name), dtype=float)
    if isinstance(e, Add):
        acc = 0.0
        for t in e.terms:
            acc = acc + _eval_np(t, at)
        return acc
    if isinstance(e, Mul):
        acc = 1.0
        for f in e.factors:
            acc = acc * _eval_np(f, at)
        return acc
    if isinstance(e, Neg):
        return -_eval_np(e.arg, at)
    if isinstance(e, Pow):
        b = np.asarray(_eval_np(e.base, at), dtype=float)
        r = e.exponent
        if r.denominator == 1:
            out = np.power(b, float(r.numerator))
            if r < 0:
                out = np.where(b == 0, np.nan, out)
            return out
        mag = np.power(np.abs(b), float(r))
        if r < 0:
            mag = np.where(b == 0, np.nan, mag)
        if r.denominator % 2 == 1 and r.numerator % 2 == 1:
            return np.sign(b) * mag
        return mag
    if isinstance(e, Func):
        a = _eval_np(e.arg, at)
        name = e.name
        if name == "sec":
            return 1.0 / np.cos(a)
        if name == "sqrt":
            return np.where(np.asarray(a) < 0, np.nan, np.sqrt(np.abs(a)))
        return getattr(np, "abs" if name == "abs" else name)(a)
    raise TypeError(type(e))


# ---------------------------------------------------------------- exact


def exact_value(e: Expr, at: Mapping[str, Fraction]) -> Fraction | None:
    """Exact rational value of ``e`` at a rational point, or None.

    None covers both irrational values (``sin(1)``) and undefined ones.
    """
    try:
        return _exact(e, at)
    except _NotRational:
        return None


class _NotRational(Exception):
    pass


def _exact(e: Expr, at) -> Fraction:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return Fraction(_lookup(at, e.name))
    if isinstance(e, Add):
        return sum((_exact(t, at) for t in e.terms), Fraction(0))
    if isinstance(e, Mul):
        acc = Fraction(1)
        for f in e.factors:
            acc *= _exact(f, at)
        return acc
    if isinstance(e, Neg):
        return -_exact(e.arg, at)
    if isinstance(e, Pow):
        val = rational_power(_exact(e.base, at), e.exponent)
        if val is None:
            raise _NotRational
        return val
    if isinstance(e, Func):
        a = _exact(e.arg, at)
        name = e.name
        if name == "abs":
            return abs(a)
        if name == "sqrt":
            if a < 0:
                raise _NotRational
            val = rational_power(a, Fraction(1, 2))
            if val is None:
                raise _NotRational
            return val
        if a == 0:
            return Fraction(0) if name in ("sin", "tan") else Fraction(1)
        raise _NotRational
    raise TypeError(type(e))
