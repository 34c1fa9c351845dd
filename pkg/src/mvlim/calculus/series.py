"""Truncated Puiseux series in one parameter with exact rational data.

A series stores the terms below its truncation order; everything at or
above ``order`` is unknown.  ``order == inf`` marks an exact (finite)
expansion.  Expansion happens at ``t -> 0+`` so ``t^(p/q)`` is always the
positive root.

Exponents are kept as rationals on whatever lattice the expression
produces; no rescaling of the parameter happens here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from ..expr import Add, Const, Expr, Func, Mul, Neg, Pow, Var, rational_power

INF = math.inf


class SeriesError(ArithmeticError):
    """Expansion failed for structural reasons (pole, irrational coefficient...)."""

    def __init__(self, message: str, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class InsufficientOrder(SeriesError):
    """Cancellation left too few known terms; retry with a larger working order."""


def _as_order(x):
    return x if x == INF else Fraction(x)


@dataclass(frozen=True)
class PuiseuxSeries:
    terms: tuple  # ((exponent, coefficient), ...) strictly ascending
    order: object  # Fraction or INF
    var: str = "t"

    @classmethod
    def build(cls, coeffs: dict, order, var: str = "t") -> "PuiseuxSeries":
        order = _as_order(order)
        items = sorted((e, c) for e, c in coeffs.items() if c != 0 and e < order)
        return cls(tuple(items), order, var)

    @classmethod
    def constant(cls, c, var: str = "t") -> "PuiseuxSeries":
        return cls.build({Fraction(0): Fraction(c)}, INF, var)

    @classmethod
    def monomial(cls, coeff, exponent, var: str = "t") -> "PuiseuxSeries":
        return cls.build({Fraction(exponent): Fraction(coeff)}, INF, var)

    # ---- inspection

    @property
    def is_exact(self) -> bool:
        return self.order == INF

    @property
    def is_zero(self) -> bool:
        return not self.terms and self.order == INF

    @property
    def valuation(self):
        return self.terms[0][0] if self.terms else self.order

    @property
    def leading(self) -> tuple[Fraction, Fraction]:
        if not self.terms:
            raise InsufficientOrder("no known terms", achieved=self.order)
        return self.terms[0]

    def coefficient(self, exponent) -> Fraction:
        exponent = Fraction(exponent)
        for e, c in self.terms:
            if e == exponent:
                return c
        if exponent >= self.order:
            raise InsufficientOrder(f"t^{exponent} is beyond the truncation order")
        return Fraction(0)

    def as_dict(self) -> dict:
        return dict(self.terms)

    def truncate(self, order) -> "PuiseuxSeries":
        order = min(self.order, _as_order(order))
        return PuiseuxSeries(tuple((e, c) for e, c in self.terms if e < order), order, self.var)

    def evaluate(self, t) -> float:
        return sum(float(c) * float(t) ** float(e) for e, c in self.terms)

    def evaluate_mp(self, t):
        import mpmath

        return mpmath.fsum(
            (mpmath.mpf(c.numerator) / c.denominator) * t ** (mpmath.mpf(e.numerator) / e.denominator)
            for e, c in self.terms
        )

    def __str__(self) -> str:
        parts = []
        for e, c in self.terms:
            mono = "" if e == 0 else (f"{self.var}" if e == 1 else f"{self.var}^({e})")
            coef = str(c)
            if mono:
                parts.append(mono if c == 1 else f"{coef}·{mono}")
            else:
                parts.append(coef)
        if self.order != INF:
            parts.append(f"O({self.var}^({self.order}))")
        return " + ".join(parts) if parts else "0"

    # ---- ring operations (truncated at ``cap``)

    def __add__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        return series_add(self, other)

    def __neg__(self) -> "PuiseuxSeries":
        return scale(self, Fraction(-1))

    def __sub__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        return series_add(self, scale(other, Fraction(-1)))

    def __mul__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        return series_mul(self, other, INF)


def series_add(a: PuiseuxSeries, b: PuiseuxSeries, cap=INF) -> PuiseuxSeries:
    order = min(a.order, b.order, cap)
    out = dict(a.terms)
    for e, c in b.terms:
        out[e] = out.get(e, 0) + c
    return PuiseuxSeries.build(out, order, a.var)


def scale(a: PuiseuxSeries, c: Fraction) -> PuiseuxSeries:
    if c == 0:
        return PuiseuxSeries((), INF, a.var)
    return PuiseuxSeries(tuple((e, x * c) for e, x in a.terms), a.order, a.var)


def shift(a: PuiseuxSeries, by: Fraction) -> PuiseuxSeries:
    return PuiseuxSeries(tuple((e + by, c) for e, c in a.terms), a.order + by, a.var)


def series_mul(a: PuiseuxSeries, b: PuiseuxSeries, cap=INF) -> PuiseuxSeries:
    if a.is_zero or b.is_zero:
        return PuiseuxSeries((), INF, a.var)
    order = min(a.order + b.valuation, b.order + a.valuation, cap)
    out: dict = {}
    bt = b.terms
    for ea, ca in a.terms:
        for eb, cb in bt:
            e = ea + eb
            if e >= order:
                break
            out[e] = out.get(e, 0) + ca * cb
    return PuiseuxSeries.build(out, order, a.var)


def series_pow_int(a: PuiseuxSeries, n: int, cap=INF) -> PuiseuxSeries:
    if n < 0:
        return series_pow(a, Fraction(n), cap)
    result = PuiseuxSeries.constant(1, a.var)
    base = a
    while n:
        if n & 1:
            result = series_mul(result, base, cap)
        n >>= 1
        if n:
            base = series_mul(base, base, cap)
    return result


def compose(coeff: Callable[[int], Fraction], s: PuiseuxSeries, cap) -> PuiseuxSeries:
    """``sum_k coeff(k) * s^k`` for ``s`` with positive valuation (infinite series)."""
    var = s.var
    result = PuiseuxSeries.constant(coeff(0), var)
    if s.is_zero:
        return result
    v = s.valuation
    if v <= 0:
        raise InsufficientOrder("inner series has no positive valuation", achieved=s.order)
    pk = PuiseuxSeries.constant(1, var)
    k = 1
    while True:
        if k * v >= cap:
            return result.truncate(k * v)
        pk = series_mul(pk, s, cap)
        a = coeff(k)
        if a:
            result = series_add(result, scale(pk, a), cap)
        k += 1


def _factorial(k: int) -> int:
    return math.factorial(k)


def _sin_coeff(k: int) -> Fraction:
    if k % 2 == 0:
        return Fraction(0)
    return Fraction((-1) ** ((k - 1) // 2), _factorial(k))


def _cos_coeff(k: int) -> Fraction:
    if k % 2:
        return Fraction(0)
    return Fraction((-1) ** (k // 2), _factorial(k))


def _exp_coeff(k: int) -> Fraction:
    return Fraction(1, _factorial(k))


def _binom_coeff(r: Fraction) -> Callable[[int], Fraction]:
    cache = [Fraction(1)]

    def coeff(k: int) -> Fraction:
        while len(cache) <= k:
            j = len(cache)
            cache.append(cache[-1] * (r - (j - 1)) / j)
        return cache[k]

    return coeff


def series_pow(a: PuiseuxSeries, r: Fraction, cap=INF) -> PuiseuxSeries:
    """``a^r`` under the real power convention, for t > 0."""
    r = Fraction(r)
    if r.denominator == 1 and r >= 0:
        return series_pow_int(a, r.numerator, cap)
    if a.is_zero:
        if r < 0:
            raise SeriesError("division by an identically zero series")
        return a
    if not a.terms:
        raise InsufficientOrder("base has no known terms", achieved=a.order)
    e0, c0 = a.terms[0]
    cr = rational_power(c0, r)
    if cr is None:
        raise SeriesError(f"leading coefficient {c0} has no rational power {r}")
    beta = PuiseuxSeries.build(
        {e - e0: c / c0 for e, c in a.terms[1:]}, a.order - e0, a.var
    )
    rel_cap = cap - e0 * r if cap != INF else INF
    if beta.is_zero:
        body = PuiseuxSeries.constant(1, a.var)
    else:
        if rel_cap == INF:
            if beta.order == INF:
                raise ValueError("a finite truncation cap is required")
            rel_cap = beta.order
        body = compose(_binom_coeff(r), beta, rel_cap)
    return scale(shift(body, e0 * r), cr)


def series_inverse(a: PuiseuxSeries, cap=INF) -> PuiseuxSeries:
    return series_pow(a, Fraction(-1), cap)


def _split_constant(s: PuiseuxSeries, what: str) -> PuiseuxSeries:
    if s.terms and s.terms[0][0] < 0:
        raise SeriesError(f"{what} of a series with a pole")
    if s.order <= 0:
        raise InsufficientOrder(f"constant term of {what} argument unknown", achieved=s.order)
    c0 = s.coefficient(0)
    if c0 != 0:
        raise SeriesError(f"{what} at nonzero rational argument {c0} is not rational")
    return s


def series_func(name: str, s: PuiseuxSeries, cap) -> PuiseuxSeries:
    if name == "abs":
        if s.is_zero:
            return s
        if not s.terms:
            raise InsufficientOrder("sign of abs argument unknown", achieved=s.order)
        return s if s.terms[0][1] > 0 else scale(s, Fraction(-1))
    if name == "sqrt":
        if s.is_zero:
            return s
        if not s.terms:
            raise InsufficientOrder("sign of sqrt argument unknown", achieved=s.order)
        if s.terms[0][1] < 0:
            raise SeriesError("sqrt of a negative quantity")
        return series_pow(s, Fraction(1, 2), cap)
    s = _split_constant(s, name)
    if name == "sin":
        return compose(_sin_coeff, s, cap)
    if name == "cos":
        return compose(_cos_coeff, s, cap)
    if name == "exp":
        return compose(_exp_coeff, s, cap)
    if name == "sec":
        return series_inverse(compose(_cos_coeff, s, cap), cap)
    if name == "tan":
        return series_mul(
            compose(_sin_coeff, s, cap), series_inverse(compose(_cos_coeff, s, cap), cap), cap
        )
    raise ValueError(name)


def expand(e: Expr, var: str, cap) -> PuiseuxSeries:
    """Expand ``e`` at ``var -> 0+``, truncating every intermediate at ``cap``."""
    cap = _as_order(cap)
    memo: dict[Expr, PuiseuxSeries] = {}

    def go(node: Expr) -> PuiseuxSeries:
        hit = memo.get(node)
        if hit is not None:
            return hit
        out = _expand(node, go, var, cap)
        memo[node] = out
        return out

    return go(e)


def _expand(e: Expr, go, var: str, cap) -> PuiseuxSeries:
    if isinstance(e, Const):
        return PuiseuxSeries.constant(e.value, var).truncate(cap)
    if isinstance(e, Var):
        if e.name != var:
            raise SeriesError(f"expression is not univariate in {var}: found {e.name}")
        return PuiseuxSeries.monomial(1, 1, var).truncate(cap)
    if isinstance(e, Add):
        acc = go(e.terms[0])
        for t in e.terms[1:]:
            acc = series_add(acc, go(t), cap)
        return acc
    if isinstance(e, Mul):
        acc = go(e.factors[0])
        for f in e.factors[1:]:
            acc = series_mul(acc, go(f), cap)
        return acc
    if isinstance(e, Neg):
        return scale(go(e.arg), Fraction(-1))
    if isinstance(e, Pow):
        if isinstance(e.base, Var) and e.base.name == var:
            return PuiseuxSeries.monomial(1, e.exponent, var).truncate(cap)
        return series_pow(go(e.base), e.exponent, cap)
    if isinstance(e, Func):
        return series_func(e.name, go(e.arg), cap)
    raise TypeError(type(e))


def puiseux_expand(
    e: Expr,
    order=Fraction(4),
    var: str = "t",
    allow_negative: bool = False,
    max_doublings: int = 4,
) -> PuiseuxSeries:
    """Series of ``e`` at ``var -> 0+`` known up to ``O(var^order)``.

    The working order doubles up to ``max_doublings`` times when
    cancellation eats the requested precision.
    """
    order = Fraction(order)
    if order <= 0:
        raise ValueError("truncation order must be positive")
    work = order
    achieved = None
    for _ in range(max_doublings + 1):
        try:
            s = expand(e, var, work)
        except InsufficientOrder as exc:
            achieved = exc.achieved
            work *= 2
            continue
        if s.order >= order:
            s = s.truncate(order)
            if not allow_negative and s.terms and s.terms[0][0] < 0:
                raise SeriesError(
                    f"negative leading exponent {s.terms[0][0]}: the expression blows up at 0"
                )
            return s
        achieved = s.order
        work *= 2
    raise SeriesError(
        f"could not reach truncation order {order}; achieved {achieved}", achieved=achieved
    )


def series_from_terms(terms: Iterable[tuple], order=INF, var: str = "t") -> PuiseuxSeries:
    return PuiseuxSeries.build({Fraction(e): Fraction(c) for e, c in terms}, order, var)
