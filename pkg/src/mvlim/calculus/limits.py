"""Single-parameter limits by leading-term comparison, and Taylor leading forms."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from ..expr import (
    Const,
    Expr,
    Func,
    Var,
    as_polynomial,
    free_variables,
    func,
    is_nonnegative,
    mul,
    multiplicative_factors,
    power,
    substitute,
    to_origin,
    to_poly,
    from_poly,
)
from ..verdict import Certificate, Kind, Status, Verdict
from .series import INF, InsufficientOrder, SeriesError, expand

DEFAULT_START_ORDER = Fraction(4)
MAX_DOUBLINGS = 4


def leading_term(e: Expr, var: str = "t", order=None, max_doublings: int = MAX_DOUBLINGS):
    """``(exponent, coefficient)`` of the first nonzero term of ``e`` at ``var -> 0+``."""
    work = Fraction(order) if order is not None else DEFAULT_START_ORDER
    for _ in range(max_doublings + 1):
        try:
            s = expand(e, var, work)
        except InsufficientOrder:
            work *= 2
            continue
        if s.is_zero:
            raise SeriesError("expression is identically zero")
        if s.terms:
            return s.terms[0]
        work *= 2
    raise SeriesError(f"no nonzero term below t^{work / 2}", achieved=work / 2)


def univariate_limit(num: Expr, den: Expr, var: str = "t", order=None) -> Verdict:
    """Limit of ``num/den`` as ``var -> 0+`` by comparing leading Puiseux terms."""
    work = Fraction(order) if order is not None else DEFAULT_START_ORDER
    last_error = "truncation order unreachable"
    for _ in range(MAX_DOUBLINGS + 1):
        try:
            d = expand(den, var, work)
            if d.is_zero:
                return Verdict.inconclusive("denominator vanishes identically along the reduction")
            if not d.terms:
                work *= 2
                continue
            ed, cd = d.terms[0]
            n = expand(num, var, work)
        except InsufficientOrder as exc:
            last_error = str(exc)
            work *= 2
            continue
        except SeriesError as exc:
            return Verdict.inconclusive(f"series expansion failed: {exc}")
        cert = Certificate()
        if n.terms:
            en, cn = n.terms[0]
            lead = f"num ~ {cn}·{var}^({en}), den ~ {cd}·{var}^({ed})"
            details = {"num_lead": (en, cn), "den_lead": (ed, cd)}
            if en > ed:
                cert.add("leading-terms", lead, "ratio -> 0")
                return Verdict.exists(Fraction(0), cert, details=details)
            if en == ed:
                value = cn / cd
                cert.add("leading-terms", lead, f"ratio -> {value}")
                return Verdict.exists(value, cert, details=details)
            sign = 1 if cn / cd > 0 else -1
            cert.add("leading-terms", lead, f"ratio unbounded ({'+' if sign > 0 else '-'}inf)")
            return Verdict.does_not_exist(
                (), cert, reason="unbounded", divergence=sign, details=details
            )
        if n.is_zero or n.order > ed:
            bound = "0" if n.is_zero else f"O({var}^({n.order}))"
            cert.add("leading-terms", f"num = {bound}, den ~ {cd}·{var}^({ed})", "ratio -> 0")
            return Verdict.exists(
                Fraction(0), cert, details={"num_lead": None, "den_lead": (ed, cd)}
            )
        work *= 2
    return Verdict.inconclusive(last_error)


def two_sided_limit(num: Expr, den: Expr, var: str) -> Verdict:
    """Limit as ``var -> 0`` from both sides (``var`` is the only free variable)."""
    right = univariate_limit(num, den, var)
    flip = {var: mul(-1, Var(var))}
    left = univariate_limit(substitute(num, flip), substitute(den, flip), var)
    cert = Certificate()
    cert.extend(right.certificate)
    cert.extend(left.certificate)
    if not (right.is_conclusive and left.is_conclusive):
        bad = right if not right.is_conclusive else left
        return Verdict.inconclusive(bad.reason, cert)
    if right.is_exists and left.is_exists and right.value == left.value:
        return Verdict.exists(right.value, cert)
    if right.is_dne and left.is_dne and right.divergence == left.divergence:
        return Verdict.does_not_exist((), cert, reason="unbounded", divergence=right.divergence)
    return Verdict.does_not_exist((), cert, reason="one-sided limits differ",
                                  details={"right": right, "left": left})


def restricted_limit(num: Expr, den: Expr, path: Mapping[str, Expr], var: str = "t") -> Verdict:
    """Limit of ``num/den`` along the curve ``x = path(t)``, ``t -> 0+``."""
    return univariate_limit(substitute(num, path), substitute(den, path), var)


# ---------------------------------------------------------------- Taylor


class NotReducible(ValueError):
    """Expression is not a function of one polynomial (times monomials)."""


@dataclass
class SeriesApprox:
    original: Expr
    leading: Expr
    equivalence_ratio_limit: Fraction
    justification: Certificate = field(default_factory=Certificate)
    reduction: Expr | None = None  # the polynomial m with u = m(x)

    def __str__(self):
        return f"{self.original} ~ {self.leading}"


_U = "u__"


def _replace_arg(e: Expr, m: Expr, u: Var) -> Expr:
    if isinstance(e, Func):
        if e.arg == m:
            return func(e.name, u)
        return func(e.name, _replace_arg(e.arg, m, u))
    if isinstance(e, (Const, Var)):
        return e
    from ..expr import Add, Mul, Pow, add

    if isinstance(e, Add):
        return add(*(_replace_arg(t, m, u) for t in e.terms))
    if isinstance(e, Mul):
        return mul(*(_replace_arg(f, m, u) for f in e.factors))
    if isinstance(e, Pow):
        return power(_replace_arg(e.base, m, u), e.exponent)
    raise TypeError(type(e))


def _func_args(e: Expr) -> set:
    found = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Func):
            found.add(node.arg)
        else:
            stack.extend(node.children())
    return found


def taylor_leading(e: Expr, point: Mapping | None = None, max_order: int = 8) -> SeriesApprox:
    """Leading polynomial form of ``F(m(x))`` or ``monomial * F(m(x))`` at the point.

    ``m`` must be a polynomial vanishing at the point.  Equivalence is
    certified by the reduction ``u = m(x)``: the univariate ratio
    ``F(u) / (a u^k)`` tends to 1 from each admissible side.
    """
    if point:
        e = to_origin(e, point)
    monomial_part, rest = [], []
    for f in multiplicative_factors(e):
        p = to_poly(f)
        if p is not None and len(p) == 1:
            monomial_part.append(f)
        else:
            rest.append(f)
    if not rest:
        raise NotReducible("no function factor to replace")
    g = mul(*rest)
    args = _func_args(g)
    if len(args) != 1:
        raise NotReducible("function arguments are not a single common polynomial")
    (m,) = args
    m_poly = to_poly(m)
    if m_poly is None:
        raise NotReducible("function argument is not polynomial")
    if () in m_poly:
        raise NotReducible("function argument does not vanish at the point")
    u = Var(_U)
    g_u = _replace_arg(g, m, u)
    if set(free_variables(g_u)) - {_U}:
        raise NotReducible("factor depends on the variables outside the common argument")
    try:
        k, a = leading_term(g_u, _U, Fraction(max_order))
    except SeriesError as exc:
        raise NotReducible(f"no leading term: {exc}") from None
    if k.denominator != 1 or k < 0:
        raise NotReducible(f"leading exponent {k} is not a nonnegative integer")
    cert = Certificate()
    lead_u = mul(a, power(u, k))
    right = univariate_limit(g_u, lead_u, _U)
    if not (right.is_exists and right.value == 1):
        raise NotReducible("leading form does not match from the right")
    sides = ["u -> 0+"]
    if not is_nonnegative(m):
        flip = {_U: mul(-1, u)}
        left = univariate_limit(substitute(g_u, flip), substitute(lead_u, flip), _U)
        if not (left.is_exists and left.value == 1):
            raise NotReducible("leading form does not match from the left")
        sides.append("u -> 0-")
    leading = mul(*monomial_part, a, power(m, k))
    p = to_poly(leading)
    if p is not None:
        leading = from_poly(p)
    g_text = str(g_u).replace(_U, "u")
    cert.add(
        "taylor-equivalence",
        f"u = {m}; {g_text} vs {str(lead_u).replace(_U, 'u')}",
        f"ratio -> 1 as {' and '.join(sides)}, so {mul(*rest)} ~ {mul(a, power(m, k))}",
    )
    return SeriesApprox(e, leading, Fraction(1), cert, m)
