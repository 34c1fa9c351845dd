"""Exact rational linear programming (dense two-phase simplex, Bland's rule).

Solves ``maximize c.x  subject to  A x <= b, x >= 0`` over ``Fraction``.
The programs here are tiny (a handful of variables), so a dense tableau
is simplest and plenty fast.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class LPInfeasible(ValueError):
    pass


class LPUnbounded(ValueError):
    pass


@dataclass(frozen=True)
class LPResult:
    x: tuple  # optimal point
    value: Fraction


def _pivot(T: list, basis: list, row: int, col: int) -> None:
    pr = T[row]
    p = pr[col]
    if p != 1:
        T[row] = pr = [v / p for v in pr]
    for i, r in enumerate(T):
        if i != row and r[col] != 0:
            f = r[col]
            T[i] = [a - f * b for a, b in zip(r, pr)]
    basis[row] = col


def _run(T: list, basis: list, obj: int, allowed: int) -> None:
    """Iterate on objective row ``obj`` (stored as reduced costs to minimize)."""
    m = len(basis)
    while True:
        col = next((j for j in range(allowed) if T[obj][j] < 0), None)
        if col is None:
            return
        best, row = None, None
        for i in range(m):
            a = T[i][col]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[row]):
                    best, row = ratio, i
        if row is None:
            raise LPUnbounded("objective is unbounded")
        _pivot(T, basis, row, col)


def maximize(c: Sequence, A_ub: Sequence[Sequence], b_ub: Sequence) -> LPResult:
    """Exact optimum of ``max c.x`` s.t. ``A_ub x <= b_ub``, ``x >= 0``."""
    c = [Fraction(v) for v in c]
    A = [[Fraction(v) for v in row] for row in A_ub]
    b = [Fraction(v) for v in b_ub]
    n, m = len(c), len(A)
    if any(len(row) != n for row in A) or len(b) != m:
        raise ValueError("dimension mismatch")
    # columns: x (n) | slack (m) | artificial (m) | rhs
    width = n + 2 * m + 1
    T, basis = [], []
    for i in range(m):
        sign = -1 if b[i] < 0 else 1
        row = [Fraction(0)] * width
        for j in range(n):
            row[j] = sign * A[i][j]
        row[n + i] = Fraction(sign)
        row[n + m + i] = Fraction(1)
        row[-1] = sign * b[i]
        T.append(row)
        basis.append(n + m + i)
    # phase 1: minimize the sum of artificials
    phase1 = [Fraction(0)] * width
    for r in T:
        for j in range(width):
            phase1[j] -= r[j]
    for i in range(m):
        phase1[n + m + i] = Fraction(0)
    T.append(phase1)
    _run(T, basis, m, n + m)
    if T[m][-1] != 0:
        raise LPInfeasible("constraints are infeasible")
    # drive degenerate artificials out of the basis
    for i in range(m):
        if basis[i] >= n + m:
            col = next((j for j in range(n + m) if T[i][j] != 0), None)
            if col is not None:
                _pivot(T, basis, i, col)
    T.pop()
    # phase 2
    obj = [Fraction(0)] * width
    for j in range(n):
        obj[j] = -c[j]
    for i, bj in enumerate(basis):
        if obj[bj] != 0:
            f = obj[bj]
            obj = [a - f * v for a, v in zip(obj, T[i])]
    T.append(obj)
    _run(T, basis, m, n + m)
    x = [Fraction(0)] * n
    for i, bj in enumerate(basis):
        if bj < n:
            x[bj] = T[i][-1]
    return LPResult(tuple(x), sum((ci * xi for ci, xi in zip(c, x)), Fraction(0)))
