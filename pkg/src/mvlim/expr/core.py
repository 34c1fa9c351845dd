"""Immutable expression trees with canonicalizing constructors.

Nodes are built through :func:`add`, :func:`mul`, :func:`power` and
:func:`func`, which flatten, fold constants, collect like terms and sort
operands so that structurally equal inputs produce equal trees.  The raw
node classes can still be instantiated directly (useful for tests); pass
such trees through :func:`canonicalize` to bring them into canonical form.

Rational powers follow a fixed real-valued convention: for ``r = p/q`` in
lowest terms, ``x^r`` is ``|x|^r`` when ``q`` is even and the real root
``sign(x)^p * |x|^r`` when ``q`` is odd.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

FUNCTIONS = ("sin", "cos", "tan", "sec", "exp", "sqrt", "abs")

Number = Union[int, Fraction]


class Expr:
    __slots__ = ("_hash",)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if type(self) is not type(other) or self._hash != other._hash:
            return False
        return self._fields() == other._fields()

    def __ne__(self, other) -> bool:
        return not self == other

    def _fields(self) -> tuple:
        raise NotImplementedError

    def children(self) -> tuple["Expr", ...]:
        return ()

    def __str__(self) -> str:
        from .printer import to_string

        return to_string(self)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({str(self)!r})"

    # arithmetic sugar; always canonical
    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return add(self, mul(-1, other))

    def __rsub__(self, other):
        return add(other, mul(-1, self))

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __truediv__(self, other):
        return mul(self, power(other, -1))

    def __rtruediv__(self, other):
        return mul(other, power(self, -1))

    def __neg__(self):
        return mul(-1, self)

    def __pow__(self, exponent):
        return power(self, exponent)


def _init(node: Expr, **fields) -> None:
    for key, value in fields.items():
        object.__setattr__(node, key, value)
    object.__setattr__(node, "_hash", hash((type(node).__name__, node._fields())))


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value: Number):
        _init(self, value=Fraction(value))

    def _fields(self):
        return (self.value,)


class Var(Expr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        _init(self, name=name)

    def _fields(self):
        return (self.name,)


class Add(Expr):
    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Expr]):
        _init(self, terms=tuple(terms))

    def _fields(self):
        return self.terms

    def children(self):
        return self.terms


class Mul(Expr):
    __slots__ = ("factors",)

    def __init__(self, factors: Iterable[Expr]):
        _init(self, factors=tuple(factors))

    def _fields(self):
        return self.factors

    def children(self):
        return self.factors


class Pow(Expr):
    __slots__ = ("base", "exponent")

    def __init__(self, base: Expr, exponent: Number):
        _init(self, base=base, exponent=Fraction(exponent))

    def _fields(self):
        return (self.base, self.exponent)

    def children(self):
        return (self.base,)


class Neg(Expr):
    """Negation node; canonical constructors rewrite it to ``-1 * arg``."""

    __slots__ = ("arg",)

    def __init__(self, arg: Expr):
        _init(self, arg=arg)

    def _fields(self):
        return (self.arg,)

    def children(self):
        return (self.arg,)


class Func(Expr):
    __slots__ = ("name", "arg")

    def __init__(self, name: str, arg: Expr):
        if name not in FUNCTIONS:
            raise ValueError(f"unknown function {name!r}")
        _init(self, name=name, arg=arg)

    def _fields(self):
        return (self.name, self.arg)

    def children(self):
        return (self.arg,)


ZERO = Const(0)
ONE = Const(1)


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, Fraction)):
        return Const(value)
    if isinstance(value, str):
        from .parser import parse

        return parse(value)
    raise TypeError(f"cannot convert {type(value).__name__} to Expr")


# ---------------------------------------------------------------- exponents


def sign_parity(r: Fraction) -> int:
    """1 if ``x^r`` carries the sign of ``x`` under the power convention."""
    if r.denominator % 2 == 0:
        return 0
    return r.numerator % 2


def can_merge_sum(a: Fraction, b: Fraction) -> bool:
    """Whether ``x^a * x^b == x^(a+b)`` for every real ``x != 0``."""
    return (sign_parity(a) + sign_parity(b)) % 2 == sign_parity(a + b)


def can_merge_nested(a: Fraction, b: Fraction) -> bool:
    """Whether ``(x^a)^b == x^(a*b)`` for every real ``x != 0``."""
    return (sign_parity(a) * sign_parity(b)) % 2 == sign_parity(a * b)


def integer_root(n: int, k: int) -> int | None:
    """Exact k-th root of a nonnegative integer, or None."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2:
        return n
    # integer Newton from an overestimate converges to floor(n^(1/k))
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    return x if x**k == n else None


def rational_power(c: Fraction, r: Fraction) -> Fraction | None:
    """``c^r`` under the power convention when it is rational, else None.

    Returns None for ``0^r`` with ``r < 0``.
    """
    c = Fraction(c)
    r = Fraction(r)
    if c == 0:
        return None if r < 0 else (Fraction(1) if r == 0 else Fraction(0))
    p, q = r.numerator, r.denominator
    a = abs(c)
    num = integer_root(a.numerator, q)
    den = integer_root(a.denominator, q)
    if num is None or den is None:
        return None
    root = Fraction(num, den) ** p
    if c < 0 and q % 2 == 1 and p % 2 == 1:
        root = -root
    return root


# ---------------------------------------------------------------- ordering


def sort_key(e: Expr) -> tuple:
    if isinstance(e, Const):
        return (0, e.value)
    if isinstance(e, Var):
        return (1, e.name)
    if isinstance(e, Pow):
        return (2, sort_key(e.base), -e.exponent)
    if isinstance(e, Func):
        return (3, e.name, sort_key(e.arg))
    if isinstance(e, Mul):
        return (4, tuple(sort_key(f) for f in e.factors))
    if isinstance(e, Add):
        return (5, tuple(sort_key(t) for t in e.terms))
    if isinstance(e, Neg):
        return (6, sort_key(e.arg))
    raise TypeError(type(e))


def _factor_key(f: Expr) -> tuple:
    base, exp = (f.base, f.exponent) if isinstance(f, Pow) else (f, Fraction(1))
    if isinstance(base, Var):
        return (0, base.name, -exp)
    return (1, sort_key(base), -exp)


def _term_key(t: Expr) -> tuple:
    """Order additive terms: variable name, then exponent descending."""
    _, rest = split_coeff(t)
    if rest is None:
        return (1,)
    factors = rest.factors if isinstance(rest, Mul) else (rest,)
    var_part = []
    other = []
    for f in factors:
        base, exp = (f.base, f.exponent) if isinstance(f, Pow) else (f, Fraction(1))
        if isinstance(base, Var):
            var_part.append((base.name, -exp))
        else:
            other.append(sort_key(f))
    return (0, tuple(var_part), tuple(other))


# ---------------------------------------------------------------- constructors


def split_coeff(t: Expr) -> tuple[Fraction, Expr | None]:
    """Split a canonical term into (rational coefficient, remainder)."""
    if isinstance(t, Const):
        return t.value, None
    if isinstance(t, Mul) and isinstance(t.factors[0], Const):
        rest = t.factors[1:]
        return t.factors[0].value, rest[0] if len(rest) == 1 else Mul(rest)
    return Fraction(1), t


def _scaled(rest: Expr, c: Fraction) -> Expr:
    if c == 1:
        return rest
    if isinstance(rest, Mul):
        return Mul((Const(c),) + rest.factors)
    return Mul((Const(c), rest))


def add(*terms) -> Expr:
    flat: list[Expr] = []
    for t in terms:
        t = as_expr(t)
        if isinstance(t, Neg):
            t = canonicalize(t)
        if isinstance(t, Add):
            flat.extend(t.terms)
        else:
            flat.append(t)
    coeffs: dict = {}
    for t in flat:
        c, rest = split_coeff(t)
        coeffs[rest] = coeffs.get(rest, 0) + c
    out = []
    for rest, c in coeffs.items():
        if c == 0:
            continue
        out.append(Const(c) if rest is None else _scaled(rest, c))
    if not out:
        return ZERO
    if len(out) == 1:
        return out[0]
    out.sort(key=_term_key)
    return Add(out)


def mul(*factors) -> Expr:
    flat: list[Expr] = []
    stack = [as_expr(f) for f in reversed(factors)]
    while stack:
        f = stack.pop()
        if isinstance(f, Neg):
            f = canonicalize(f)
        if isinstance(f, Mul):
            stack.extend(reversed(f.factors))
        else:
            flat.append(f)
    coeff = Fraction(1)
    groups: dict[Expr, list[Fraction]] = {}
    for f in flat:
        if isinstance(f, Const):
            coeff *= f.value
            continue
        base, exp = (f.base, f.exponent) if isinstance(f, Pow) else (f, Fraction(1))
        exps = groups.setdefault(base, [])
        for i, e in enumerate(exps):
            if _mergeable(base, e, exp):
                exps[i] = e + exp
                break
        else:
            exps.append(exp)
    if coeff == 0:
        return ZERO
    out: list[Expr] = []
    for base, exps in groups.items():
        for e in exps:
            if e == 0:
                continue
            p = power(base, e)
            if isinstance(p, Const):
                coeff *= p.value
            elif isinstance(p, Mul):
                # only reachable for Const bases with a rational coefficient part
                for g in p.factors:
                    if isinstance(g, Const):
                        coeff *= g.value
                    else:
                        out.append(g)
            else:
                out.append(p)
    if coeff == 0:
        return ZERO
    if not out:
        return Const(coeff)
    out.sort(key=_factor_key)
    if coeff == 1 and len(out) == 1:
        return out[0]
    if coeff != 1:
        out.insert(0, Const(coeff))
    return Mul(out)


def _mergeable(base: Expr, a: Fraction, b: Fraction) -> bool:
    if isinstance(base, Const) and base.value > 0:
        return True
    return can_merge_sum(a, b)


def power(base, exponent) -> Expr:
    base = as_expr(base)
    if isinstance(base, Neg):
        base = canonicalize(base)
    e = Fraction(exponent)
    if e == 0:
        return ONE
    if e == 1:
        return base
    if isinstance(base, Const):
        c = base.value
        if c == 1:
            return ONE
        if e.denominator == 1:
            if c == 0 and e < 0:
                return Pow(base, e)
            return Const(c**e.numerator)
        val = rational_power(c, e)
        if val is not None:
            return Const(val)
        return Pow(base, e)
    if isinstance(base, Mul):
        return mul(*(power(f, e) for f in base.factors))
    if isinstance(base, Pow):
        if can_merge_nested(base.exponent, e) or (
            isinstance(base.base, Const) and base.base.value > 0
        ):
            return power(base.base, base.exponent * e)
        return Pow(base, e)
    return Pow(base, e)


def func(name: str, arg) -> Expr:
    arg = as_expr(arg)
    if isinstance(arg, Neg):
        arg = canonicalize(arg)
    if name not in FUNCTIONS:
        raise ValueError(f"unknown function {name!r}")
    if isinstance(arg, Const):
        c = arg.value
        if c == 0 and name in ("sin", "tan", "sqrt", "abs"):
            return ZERO
        if c == 0 and name in ("cos", "sec", "exp"):
            return ONE
        if name == "abs":
            return Const(abs(c))
        if name == "sqrt" and c > 0:
            root = rational_power(c, Fraction(1, 2))
            if root is not None:
                return Const(root)
    if name == "abs":
        coeff, rest = split_coeff(arg)
        if coeff != 1 and rest is not None:
            return mul(abs(coeff), func("abs", rest))
    return Func(name, arg)


def neg(e) -> Expr:
    return mul(-1, e)


def sub(a, b) -> Expr:
    return add(a, mul(-1, b))


def div(a, b) -> Expr:
    return mul(a, power(b, -1))


def var(name: str) -> Var:
    return Var(name)


def const(value: Number) -> Const:
    return Const(value)


# ---------------------------------------------------------------- traversal


def canonicalize(e: Expr) -> Expr:
    """Rebuild ``e`` through the canonical constructors."""
    if isinstance(e, (Const, Var)):
        return e
    if isinstance(e, Add):
        return add(*(canonicalize(t) for t in e.terms))
    if isinstance(e, Mul):
        return mul(*(canonicalize(f) for f in e.factors))
    if isinstance(e, Pow):
        return power(canonicalize(e.base), e.exponent)
    if isinstance(e, Neg):
        return mul(-1, canonicalize(e.arg))
    if isinstance(e, Func):
        return func(e.name, canonicalize(e.arg))
    raise TypeError(type(e))


def free_variables(e: Expr) -> tuple[str, ...]:
    """Sorted names of the variables occurring in ``e``."""
    names: set[str] = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            names.add(node.name)
        else:
            stack.extend(node.children())
    return tuple(sorted(names))


def substitute(e: Expr, bindings: dict) -> Expr:
    """Simultaneous substitution of variables, canonicalized."""
    bound = {k: as_expr(v) for k, v in bindings.items()}
    cache: dict[Expr, Expr] = {}

    def walk(node: Expr) -> Expr:
        hit = cache.get(node)
        if hit is not None:
            return hit
        if isinstance(node, Var):
            out = bound.get(node.name, node)
        elif isinstance(node, Const):
            out = node
        elif isinstance(node, Add):
            out = add(*(walk(t) for t in node.terms))
        elif isinstance(node, Mul):
            out = mul(*(walk(f) for f in node.factors))
        elif isinstance(node, Pow):
            out = power(walk(node.base), node.exponent)
        elif isinstance(node, Neg):
            out = mul(-1, walk(node.arg))
        elif isinstance(node, Func):
            out = func(node.name, walk(node.arg))
        else:
            raise TypeError(type(node))
        cache[node] = out
        return out

    return walk(e)


def contains_func(e: Expr) -> bool:
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Func):
            return True
        stack.extend(node.children())
    return False


def additive_terms(e: Expr) -> tuple[Expr, ...]:
    return e.terms if isinstance(e, Add) else (e,)


def distribute_constants(e: Expr) -> Expr:
    """Push rational coefficients into sums: ``-(a + b) + c`` becomes ``-a - b + c``."""
    out = []
    for t in additive_terms(e):
        c, rest = split_coeff(t)
        if isinstance(rest, Add):
            out.extend(mul(c, s) for s in additive_terms(distribute_constants(rest)))
        else:
            out.append(t)
    return add(*out)


def multiplicative_factors(e: Expr) -> tuple[Expr, ...]:
    return e.factors if isinstance(e, Mul) else (e,)


def as_quotient(e: Expr) -> tuple[Expr, Expr]:
    """Split a canonical expression into numerator and denominator."""
    num, den = [], []
    for f in multiplicative_factors(e):
        if isinstance(f, Pow) and f.exponent < 0:
            den.append(power(f.base, -f.exponent))
        elif isinstance(f, Const) and f.value.denominator != 1:
            num.append(Const(f.value.numerator))
            den.append(Const(f.value.denominator))
        else:
            num.append(f)
    return mul(*num), mul(*den)


def is_nonnegative(e: Expr) -> bool:
    """Conservative syntactic test that ``e >= 0`` wherever defined."""
    if isinstance(e, Const):
        return e.value >= 0
    if isinstance(e, Pow):
        if sign_parity(e.exponent) == 0:
            return True
        return is_nonnegative(e.base)
    if isinstance(e, Func):
        return e.name in ("abs", "sqrt", "exp")
    if isinstance(e, Mul):
        return all(is_nonnegative(f) for f in e.factors)
    if isinstance(e, Add):
        return all(is_nonnegative(t) for t in e.terms)
    return False
