"""Numerical cross-checks: limits along sampled paths and derivative spot checks.

Nothing here proves anything.  Evaluation runs in mpmath at high precision
so that cancellation (``2 - 2cos(u)`` with tiny ``u``) does not turn into
noise long before ``t`` gets small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import mpmath
import numpy as np

from .calculus import directional_derivative
from .expr import UNDEFINED, Expr, Var, add, as_expr, evaluate_mp, mul, parse, power

DEFAULT_TOL = 1e-3
UNBOUNDED = 1e6
DPS = 160
TAIL = 5


def close(a: float, b: float, tol: float = DEFAULT_TOL) -> bool:
    """Relative comparison that turns absolute near zero."""
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class Schedule:
    """Geometric ``t_k = start * ratio^k`` for ``k = 0..count-1``."""

    start: Fraction = Fraction(1, 16)
    ratio: Fraction = Fraction(1, 2)
    count: int = 27

    def __post_init__(self):
        if not (0 < self.ratio < 1) or self.start <= 0 or self.count < 1:
            raise ValueError("schedule must decrease strictly towards 0")

    def values(self) -> list[Fraction]:
        return [self.start * self.ratio**k for k in range(self.count)]


@dataclass(frozen=True)
class PathSpec:
    parameterization: Mapping[str, Expr]  # variable -> Expr in t
    schedule: Schedule = Schedule()
    label: str = ""

    @classmethod
    def from_strings(cls, mapping: Mapping[str, str], label: str = "", schedule: Schedule = Schedule()):
        return cls({k: parse(v) for k, v in mapping.items()}, schedule, label)

    def describe(self) -> str:
        return ", ".join(f"{k}={v}" for k, v in self.parameterization.items())


@dataclass
class PathEstimate:
    label: str
    ts: list
    values: list  # float, or None where undefined
    undefined: int
    rejected: bool
    tail_spread: float | None = None
    estimate: float | None = None
    unbounded: bool = False

    @property
    def converged(self) -> bool:
        return (not self.rejected and not self.unbounded and self.tail_spread is not None
                and self.tail_spread <= DEFAULT_TOL * max(1.0, abs(self.estimate)))

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "estimate": self.estimate,
            "tail_spread": self.tail_spread,
            "undefined": self.undefined,
            "rejected": self.rejected,
            "unbounded": self.unbounded,
        }


def _mp_fraction(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def quotient_at(num: Expr, den: Expr, path: Mapping[str, Expr], t, dps: int = DPS):
    """``num/den`` at ``path(t)`` as an mpf, or None when undefined."""
    with mpmath.workdps(dps):
        tv = t if isinstance(t, mpmath.mpf) else (
            _mp_fraction(Fraction(t)) if isinstance(t, (Fraction, int)) else mpmath.mpf(t))
        env = {}
        for name, e in path.items():
            v = evaluate_mp(e, {"t": tv}, dps)
            if v is UNDEFINED:
                return None
            env[name] = v
        g = evaluate_mp(den, env, dps)
        if g is UNDEFINED or g == 0:
            return None
        f = evaluate_mp(num, env, dps)
        if f is UNDEFINED:
            return None
        return f / g


def estimate_path_limit(num: Expr, den: Expr, path: PathSpec, point: Mapping | None = None,
                        dps: int = DPS) -> PathEstimate:
    """Sample ``num/den`` along ``point + path(t)`` over the schedule."""
    param = dict(path.parameterization)
    if point:
        param = {k: add(v, Fraction(point.get(k, 0))) for k, v in param.items()}
    ts = path.schedule.values()
    values, bad = [], 0
    for t in ts:
        v = quotient_at(num, den, param, t, dps)
        if v is None:
            bad += 1
            values.append(None)
        else:
            values.append(float(v) if abs(v) < 1e300 else math.copysign(math.inf, float(v)))
    est = PathEstimate(path.label, [float(t) for t in ts], values, bad, rejected=bad * 2 > len(ts))
    good = [v for v in values if v is not None]
    if est.rejected or not good:
        est.rejected = True
        return est
    tail = good[-TAIL:]
    est.estimate = tail[-1]
    est.tail_spread = max(tail) - min(tail)
    if abs(tail[-1]) > UNBOUNDED and abs(tail[-1]) >= abs(tail[0]):
        est.unbounded = True
    return est


@dataclass
class EstimateReport:
    seed: int | None
    paths: list[PathEstimate]
    descriptions: list[str]
    cross_path_spread: float | None
    suggestion: str  # converges-to | path-dependent | unbounded | noisy
    value: float | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "suggestion": self.suggestion,
            "value": self.value,
            "seed": self.seed,
            "cross_path_spread": self.cross_path_spread,
            "paths": [
                dict(p.to_dict(), path=d) for p, d in zip(self.paths, self.descriptions)
            ],
            "notes": list(self.notes),
        }

    def __str__(self) -> str:
        if self.suggestion == "converges-to":
            return f"converges-to({self.value:.12g})"
        return self.suggestion


class AllPathsRejected(ValueError):
    pass


_EXPONENTS = [Fraction(1, 2), Fraction(2, 3), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)]


def _rand_coeff(rng) -> Fraction:
    c = Fraction(int(rng.integers(1, 10)), int(rng.integers(1, 5)))
    return -c if rng.random() < 0.5 else c


def random_paths(variables: Sequence[str], n_paths: int, seed: int) -> list[PathSpec]:
    """Lines, monomial curves and shifted curves in a deterministic mix."""
    rng = np.random.default_rng(seed)
    t = Var("t")
    out = []
    for i in range(n_paths):
        kind = ("line", "monomial", "shifted")[i % 3]
        param = {}
        for v in variables:
            a = _rand_coeff(rng)
            if kind == "line":
                param[v] = mul(a, t)
            else:
                q = _EXPONENTS[int(rng.integers(len(_EXPONENTS)))]
                e = mul(a, power(t, q))
                if kind == "shifted":
                    q2 = q + _EXPONENTS[int(rng.integers(len(_EXPONENTS)))]
                    e = add(e, mul(_rand_coeff(rng), power(t, q2)))
                param[v] = e
        out.append(PathSpec(param, label=f"{kind}-{i}"))
    return out


def summarize(estimates: list[PathEstimate], descriptions: list[str], seed=None,
              tol: float = DEFAULT_TOL) -> EstimateReport:
    live = [(p, d) for p, d in zip(estimates, descriptions) if not p.rejected]
    if not live:
        raise AllPathsRejected("every path hit undefined values too often")
    ests = [p for p, _ in live]
    descs = [d for _, d in live]
    notes = [f"{len(estimates) - len(live)} path(s) rejected"] if len(live) < len(estimates) else []
    finite = [p.estimate for p in ests if p.converged]
    spread = (max(finite) - min(finite)) if finite else None
    if any(p.unbounded for p in ests):
        suggestion, value = "unbounded", None
    elif finite and spread > tol * max(1.0, max(abs(v) for v in finite)):
        suggestion, value = "path-dependent", None
    elif len(finite) == len(ests):
        suggestion, value = "converges-to", sum(finite) / len(finite)
    else:
        suggestion, value = "noisy", None
    return EstimateReport(seed, ests, descs, spread, suggestion, value, notes)


def random_path_suite(num: Expr, den: Expr, variables: Sequence[str], point: Sequence,
                      n_paths: int = 20, seed: int = 0, dps: int = DPS) -> EstimateReport:
    if n_paths < 8:
        raise ValueError("need at least 8 paths")
    pm = {v: Fraction(c) for v, c in zip(variables, point)}
    paths = random_paths(variables, n_paths, seed)
    ests = [estimate_path_limit(num, den, p, pm, dps) for p in paths]
    return summarize(ests, [p.describe() for p in paths], seed)


def value_at(num: Expr, den: Expr, path: Mapping[str, Expr], t) -> float | None:
    v = quotient_at(num, den, path, t)
    return None if v is None else float(v)


def finite_difference_check(e: Expr, direction: Sequence, variables: Sequence[str],
                            points: Sequence[Sequence[float]], h: float = 1e-5) -> float:
    """Max relative deviation between ``D_v e`` and a central difference.

    Differences are taken in mpmath so the step, not rounding, sets the error.
    """
    d = directional_derivative(e, direction, variables)
    v = [float(Fraction(c)) for c in direction]
    worst = 0.0
    with mpmath.workdps(40):
        hh = mpmath.mpf(h)
        for pt in points:
            at = {x: mpmath.mpf(c) for x, c in zip(variables, pt)}
            plus = {x: at[x] + hh * vi for x, vi in zip(variables, v)}
            minus = {x: at[x] - hh * vi for x, vi in zip(variables, v)}
            sym = evaluate_mp(d, at, 40)
            fp, fm = evaluate_mp(e, plus, 40), evaluate_mp(e, minus, 40)
            if UNDEFINED in (sym, fp, fm):
                continue
            fd = (fp - fm) / (2 * hh)
            scale = max(abs(sym), mpmath.mpf(1e-3))
            worst = max(worst, float(abs(sym - fd) / scale))
    return worst
