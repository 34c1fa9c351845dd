"""Golden problems and random generators shared by the test modules."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from hypothesis import strategies as st

from mvlim.expr import Const, Var, add, func, mul, power

THREAD_HINT = {
    "u": ["x^4", "x*y*z^2", "y-x^3+z^2", "z^3"],
    "v": "-x*y^3*z^5",
    "drop": ["u2"],
    "m": [1, 1, 1],
}
THREAD_NUM = "7*x^2*y*z^5+x*y^3-3*x^4*y*z"
THREAD_DEN = "x^8+x^2*y^2*z^4+(y-x^3+z^2)^2+z^6-x*y^3*z^5"

# (label, numerator, denominator, variables, hint, expected) with expected a
# Fraction for Exists or "dne".
GOLDEN = [
    ("sin-difference", "x-y", "sin(x)-sin(y)", "xy", None, Fraction(1)),
    ("tan-paraboloid", "sin(z)-sin(x^2+y^2)", "tan(z-x^2)-tan(y^2)", "xyz", None, Fraction(1)),
    ("cos-difference", "x^2-y^2", "cos(x)-cos(y)", "xy", None, Fraction(-2)),
    ("separation", "x^2+sin(y)^4", "sin(x)^2+y^4", "xy", None, Fraction(1)),
    ("lines-differ", "x*y", "x^2+y^2", "xy", None, "dne"),
    ("parabolas-differ", "x^2*y", "x^4+y^2", "xy", None, "dne"),
    ("polar-5/2", "x^3*y^3", "x^6+y^4", "xy", None, Fraction(0)),
    ("polar-7/3", "x^3*y^2", "x^6+x^2*y^2+y^6", "xy", None, Fraction(0)),
    ("taylor-replace", "2-2*cos(x^2*y^2)", "x^10+x^6*y^2+y^6-x^9*sin(y)", "xy", None, Fraction(0)),
    ("thread", THREAD_NUM, THREAD_DEN, "xyz", THREAD_HINT, "dne"),
]

THREAD_PATH = {"x": "t^3", "y": "t^12+t^9-t^8", "z": "t^4"}


def golden_ids():
    return [g[0] for g in GOLDEN]


# --- random expressions -------------------------------------------------

def _rat(rng, lo=1, hi=4):
    c = Fraction(int(rng.integers(lo, hi + 1)), int(rng.integers(1, 4)))
    return -c if rng.random() < 0.5 else c


def _small_poly(rng, names, max_deg=2):
    terms = []
    for _ in range(int(rng.integers(1, 3))):
        x = names[int(rng.integers(len(names)))]
        terms.append(mul(_rat(rng, 1, 2), power(Var(x), int(rng.integers(1, max_deg + 1)))))
    return add(*terms)


def _wrapped(rng, names, fname):
    """``fname`` applied to an argument kept away from poles and kinks on [-1, 1]^n."""
    p = _small_poly(rng, names)  # |p| <= 4 on the unit box
    if fname in ("tan", "sec"):
        return func(fname, mul(Fraction(1, 8), p))
    if fname == "exp":
        return func("exp", mul(Fraction(1, 2), p))
    if fname == "sqrt":
        return func("sqrt", add(power(p, 2), Fraction(1)))
    if fname == "abs":
        return func("abs", add(p, Fraction(-5)))
    return func(fname, p)


FUNCS = ("sin", "cos", "tan", "sec", "exp", "sqrt", "abs")


def random_smooth_expr(rng, names, depth=2, force=None):
    """Random expression over the full function set, smooth on the unit box."""
    if depth == 0:
        r = rng.random()
        if r < 0.35:
            return mul(_rat(rng), power(Var(names[int(rng.integers(len(names)))]), int(rng.integers(1, 4))))
        if r < 0.45:
            return Const(_rat(rng))
        fname = force or FUNCS[int(rng.integers(len(FUNCS)))]
        return _wrapped(rng, names, fname)
    a = random_smooth_expr(rng, names, depth - 1, force)
    b = random_smooth_expr(rng, names, depth - 1)
    return add(a, b) if rng.random() < 0.5 else mul(a, b)


def random_series_expr(rng):
    """Univariate composition in ``t`` with a Puiseux expansion at ``0+``."""
    t = Var("t")
    q = [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(1, 3)]

    def inner():
        # coefficients <= 1 keep sqrt and 1/(1+u) inside their domain for t <= 1/16
        e = mul(_rat(rng, 1, 1), power(t, q[int(rng.integers(len(q)))]))
        if rng.random() < 0.5:
            e = add(e, mul(_rat(rng, 1, 1), power(t, q[int(rng.integers(len(q)))] + 1)))
        return e

    def atom():
        kind = int(rng.integers(7))
        u = inner()
        if kind == 0:
            return func("sin", u)
        if kind == 1:
            return func("cos", u)
        if kind == 2:
            return func("tan", u)
        if kind == 3:
            return func("sec", u)
        if kind == 4:
            return func("exp", u)
        if kind == 5:
            return func("sqrt", add(Fraction(1), u))
        return power(add(Fraction(1), u), -1)

    e = atom()
    for _ in range(int(rng.integers(0, 3))):
        other = atom()
        r = rng.random()
        if r < 0.4:
            e = mul(e, other)
        elif r < 0.7:
            e = add(e, other)
        else:
            e = mul(e, inner())
    return e


# --- hypothesis strategies ----------------------------------------------

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
small_rationals = st.fractions(min_value=-3, max_value=3, max_denominator=4).filter(lambda f: f != 0)
exponents = st.sampled_from([Fraction(1), Fraction(2), Fraction(3), Fraction(1, 2), Fraction(-1), Fraction(2, 3)])
var_names = st.sampled_from(["x", "y", "z"])


def _leaf():
    return st.one_of(
        rationals.map(Const),
        var_names.map(Var),
    )


def _node(children):
    return st.one_of(
        st.tuples(children, children).map(lambda ab: add(*ab)),
        st.tuples(children, children).map(lambda ab: mul(*ab)),
        st.tuples(children, exponents).map(lambda be: power(be[0], be[1])),
        st.tuples(st.sampled_from(FUNCS), children).map(lambda fa: func(*fa)),
    )


expressions = st.recursive(_leaf(), _node, max_leaves=8)


def _poly_node(children):
    return st.one_of(
        st.tuples(children, children).map(lambda ab: add(*ab)),
        st.tuples(children, children).map(lambda ab: mul(*ab)),
        st.tuples(children, st.integers(0, 3)).map(lambda be: power(be[0], be[1])),
    )


polynomials = st.recursive(_leaf(), _poly_node, max_leaves=6)


def unit_points(rng, n, count):
    return [tuple(float(v) for v in rng.uniform(-1, 1, n)) for _ in range(count)]


# --- brute-force LP oracle ----------------------------------------------

def _solve_exact(rows, rhs):
    """Gauss-Jordan over Fractions; None when singular."""
    n = len(rows)
    M = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [v / p for v in M[col]]
        for i in range(n):
            if i != col and M[i][col] != 0:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[col])]
    return [M[i][-1] for i in range(n)]


def vertex_enumeration_max(c, A, b):
    """Max of ``c.x`` over ``A x <= b, x >= 0`` by trying every basic solution."""
    from itertools import combinations

    k = len(c)
    cons = [(list(row), bi) for row, bi in zip(A, b)]
    cons += [([Fraction(-1) if j == i else Fraction(0) for j in range(k)], Fraction(0)) for i in range(k)]
    best = None
    for chosen in combinations(cons, k):
        x = _solve_exact([r for r, _ in chosen], [bi for _, bi in chosen])
        if x is None:
            continue
        if all(sum(ri * xi for ri, xi in zip(r, x)) <= bi for r, bi in cons):
            val = sum(ci * xi for ci, xi in zip(c, x))
            best = val if best is None or val > best else best
    return best


def random_lp_instance(rng, max_squares=3, max_vars=4, max_exp=10):
    """Polar-bound style LP: columns are square exponent vectors, rows are variables."""
    n = int(rng.integers(1, max_vars + 1))
    k = int(rng.integers(1, max_squares + 1))
    cols = []
    for _ in range(k):
        w = [Fraction(int(rng.integers(0, max_exp + 1))) for _ in range(n)]
        if not any(w):
            w[int(rng.integers(n))] = Fraction(int(rng.integers(1, max_exp + 1)))
        cols.append(w)
    A = [[cols[i][r] for i in range(k)] for r in range(n)]
    b = [Fraction(int(rng.integers(0, max_exp + 1))) for _ in range(n)]
    return [Fraction(1)] * k, A, b
