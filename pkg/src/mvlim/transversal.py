"""Nonisolated singularities: directional-derivative quotients across a zero curve.

The denominator vanishes along a smooth curve (or surface) ``C`` through
the point.  On each component ``E_i`` of the punctured neighbourhood minus
``C`` we pick a direction ``v_i`` transverse to ``C`` with ``D_{v_i} g != 0``
on ``E_i``; then the limit of ``f/g`` over ``E_i`` equals the limit of
``D_{v_i} f / D_{v_i} g``.  Transversality is checked exactly.  The
nonvanishing of ``D_{v_i} g`` is only falsified by sampling unless a cheap
exact argument applies, and the certificate says which.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.stats import qmc

from .calculus import (
    directional_derivative,
    differentiate,
    primitive_direction,
    restricted_limit,
    two_sided_limit,
    univariate_limit,
)
from .expr import (
    Const,
    Expr,
    Func,
    Var,
    add,
    additive_terms,
    distribute_constants,
    as_expr,
    evaluate,
    evaluate_array,
    exact_value,
    free_variables,
    is_defined,
    mul,
    parse,
    split_coeff,
    sub,
    substitute,
    to_poly,
)
from .verdict import Certificate, LimitProblem, Status, Verdict, Witness, format_value

DEFAULT_RADIUS = Fraction(1, 4)
DEFAULT_SAMPLES = 4096
ZERO_TOL = 1e-12
MAX_DEPTH = 2


class EmptyComponentError(ValueError):
    pass


# ---------------------------------------------------------------- specs


@dataclass(frozen=True)
class ParamCurve:
    param: Mapping[str, Expr]  # variable -> Expr in s

    def describe(self) -> str:
        return "(" + ", ".join(f"{k}={v}" for k, v in self.param.items()) + ")"


@dataclass(frozen=True)
class ImplicitCurve:
    equation: Expr  # the curve is equation = 0

    def describe(self) -> str:
        return f"{self.equation} = 0"


@dataclass
class ComponentSpec:
    id: str
    direction: tuple | None = None
    region: list = field(default_factory=list)  # Exprs required to be > 0
    seeds: list = field(default_factory=list)

    def contains(self, at: Mapping[str, float]) -> bool:
        for r in self.region:
            val = evaluate(r, at)
            if not is_defined(val) or val <= 0:
                return False
        return True

    def mask(self, cols: Mapping[str, np.ndarray]) -> np.ndarray:
        n = len(next(iter(cols.values())))
        keep = np.ones(n, dtype=bool)
        for r in self.region:
            val = np.broadcast_to(evaluate_array(r, cols), (n,))
            keep &= np.nan_to_num(val, nan=-1.0) > 0
        return keep

    def describe(self) -> str:
        return " and ".join(f"{r} > 0" for r in self.region) or "whole neighbourhood"


@dataclass
class ZeroSetSpec:
    curves: list
    components: list = field(default_factory=list)
    source: str = "user"  # "user" or "pattern"

    @classmethod
    def from_json(cls, data: Mapping) -> "ZeroSetSpec":
        curves = []
        for c in data.get("curves", []):
            if "param" in c:
                curves.append(ParamCurve({k: parse(str(v)) for k, v in c["param"].items()}))
            elif "implicit" in c:
                curves.append(ImplicitCurve(parse(str(c["implicit"]))))
            else:
                raise ValueError("curve needs 'param' or 'implicit'")
        comps = []
        for i, c in enumerate(data.get("components", [])):
            direction = c.get("direction")
            comps.append(
                ComponentSpec(
                    str(c.get("id", f"E{i + 1}")),
                    tuple(Fraction(str(x)) for x in direction) if direction is not None else None,
                    [parse_inequality(r) for r in c.get("region", [])],
                    [tuple(Fraction(str(x)) for x in s) for s in c.get("seeds", [])],
                )
            )
        return cls(curves, comps)


_INEQ = re.compile(r"^(.*?)(>|<)(.*)$")


def parse_inequality(text: str) -> Expr:
    """``"a > b"`` becomes ``a - b`` (to be kept positive)."""
    m = _INEQ.match(text)
    if not m or "=" in text:
        raise ValueError(f"expected a strict inequality, got {text!r}")
    lhs, op, rhs = parse(m.group(1)), m.group(2), parse(m.group(3))
    return sub(lhs, rhs) if op == ">" else sub(rhs, lhs)


# ---------------------------------------------------------------- transversality


def _exact_or_float(e: Expr, at: Mapping[str, Fraction]):
    v = exact_value(e, at)
    if v is not None:
        return v
    f = evaluate(e, {k: float(c) for k, c in at.items()})
    return f if is_defined(f) and f != 0 else None


def check_transversality(spec: ZeroSetSpec, v: Sequence, point: Mapping[str, Fraction],
                         variables: Sequence[str]) -> tuple:
    """``(True | False | None, Certificate)``; None means a curve is not smooth at the point."""
    cert = Certificate()
    v = [Fraction(c) for c in v]
    for curve in spec.curves:
        if isinstance(curve, ParamCurve):
            at0 = {"s": Fraction(0)}
            tangent = []
            for x in variables:
                e = curve.param.get(x, Const(point[x]))
                if exact_value(e, at0) != point[x]:
                    raise ValueError(f"curve {curve.describe()} does not pass through the point")
                tangent.append(_exact_or_float(differentiate(e, "s"), at0) or 0)
            if all(c == 0 for c in tangent):
                cert.add("transversality", curve.describe(), "tangent vanishes at the point", Status.ASSUMED)
                return None, cert
            parallel = all(
                v[i] * tangent[j] == v[j] * tangent[i]
                for i, j in itertools.combinations(range(len(v)), 2)
            )
            cert.add("transversality", f"v={_vec(v)}, tangent={_vec(tangent)}",
                     "parallel" if parallel else "not tangent")
            if parallel:
                return False, cert
        else:
            grad = [_exact_or_float(differentiate(curve.equation, x), point) or 0 for x in variables]
            if all(c == 0 for c in grad):
                cert.add("transversality", curve.describe(), "gradient vanishes at the point", Status.ASSUMED)
                return None, cert
            dot = sum(a * b for a, b in zip(v, grad))
            cert.add("transversality", f"v={_vec(v)}, grad={_vec(grad)}",
                     f"v . grad = {format_value(dot)}" + (" = 0 (tangent)" if dot == 0 else " != 0"))
            if dot == 0:
                return False, cert
    return True, cert


def _vec(v) -> str:
    return "(" + ", ".join(format_value(c) for c in v) + ")"


# ---------------------------------------------------------------- sampling


def component_samples(component: ComponentSpec, variables: Sequence[str], point: Mapping[str, Fraction],
                      radius=DEFAULT_RADIUS, samples: int = DEFAULT_SAMPLES, seed: int = 0,
                      den: Expr | None = None) -> np.ndarray:
    """Quasi-random points of the punctured ball that lie in the component."""
    n = len(variables)
    r = float(radius)
    raw = qmc.Halton(d=n, scramble=True, seed=seed).random(samples)
    offsets = (2 * raw - 1) * r
    norms = np.linalg.norm(offsets, axis=1)
    offsets = offsets[(norms <= r) & (norms > 0)]
    centre = np.array([float(point[x]) for x in variables])
    pts = offsets + centre
    seeds = [np.array([float(c) for c in s]) for s in component.seeds]
    if seeds:
        pts = np.vstack([np.array(seeds), pts])
    cols = {x: pts[:, i] for i, x in enumerate(variables)}
    keep = component.mask(cols) if component.region else np.ones(len(pts), dtype=bool)
    if den is not None:
        g = np.broadcast_to(evaluate_array(den, cols), (len(pts),))
        keep &= np.isfinite(g) & (g != 0)
    return pts[keep]


@dataclass
class FalsifyResult:
    counterexample: tuple | None
    status: Status
    note: str
    derivative: Expr


def _poly_bound_nonzero(d: Expr, point, radius) -> bool:
    """Exact: constant term dominates the other terms on the max-norm ball."""
    p = to_poly(d)
    if p is None:
        return False
    c0 = p.get((), Fraction(0))
    if c0 == 0:
        return False
    rest = Fraction(0)
    for key, c in p.items():
        if key == ():
            continue
        deg = sum(e for _, e in key)
        if deg.denominator != 1:
            return False
        rest += abs(c) * Fraction(radius) ** int(deg)
    return rest < abs(c0)


def falsify_nonvanishing(g: Expr, v: Sequence, component: ComponentSpec, variables: Sequence[str],
                         point: Mapping[str, Fraction], radius=DEFAULT_RADIUS,
                         samples: int = DEFAULT_SAMPLES, seed: int = 0) -> FalsifyResult:
    """Look for a point of the component where ``D_v g`` vanishes."""
    if samples < 1:
        raise ValueError("samples must be positive")
    d = directional_derivative(g, v, variables)
    pts = component_samples(component, variables, point, radius, samples, seed, den=g)
    if len(pts) == 0:
        raise EmptyComponentError(f"no sample points found in component {component.id}")
    if d == Const(0):
        return FalsifyResult(tuple(pts[0]), Status.PROVED, "directional derivative is identically 0", d)
    if isinstance(d, Const):
        return FalsifyResult(None, Status.PROVED, f"directional derivative is the constant {d}", d)
    shifted = substitute(d, {x: add(Var(x), point[x]) for x in variables})
    if _poly_bound_nonzero(shifted, point, radius):
        return FalsifyResult(None, Status.PROVED, "constant term dominates on the ball", d)
    cols = {x: pts[:, i] for i, x in enumerate(variables)}
    vals = np.broadcast_to(evaluate_array(d, cols), (len(pts),))
    ok = np.isfinite(vals)
    small = np.flatnonzero(ok & (np.abs(vals) < ZERO_TOL))
    if len(small):
        return FalsifyResult(tuple(pts[small[0]]), Status.NUMERIC, "sampled zero", d)
    pos = np.flatnonzero(ok & (vals > 0))
    negs = np.flatnonzero(ok & (vals < 0))
    if len(pos) and len(negs):
        hit = _bisect_sign_change(d, component, variables, pts, pos, negs)
        return FalsifyResult(hit, Status.NUMERIC, "sign change inside the component", d)
    return FalsifyResult(None, Status.NUMERIC,
                         f"not falsified on {int(ok.sum())} sampled points (radius {radius})", d)


def _bisect_sign_change(d, component, variables, pts, pos, negs) -> tuple:
    def val(x):
        return evaluate(d, dict(zip(variables, map(float, x))))

    best = None
    for i, j in itertools.islice(zip(pos, negs), 16):
        a, b = pts[i].copy(), pts[j].copy()
        inside = True
        for _ in range(80):
            mid = (a + b) / 2
            if not component.contains(dict(zip(variables, mid))):
                inside = False
                break
            vm = val(mid)
            if not is_defined(vm):
                inside = False
                break
            if abs(vm) < ZERO_TOL:
                return tuple(mid)
            if vm > 0:
                a = mid
            else:
                b = mid
        if inside:
            best = tuple((a + b) / 2)
            break
    if best is None:
        best = tuple(pts[pos[0]])
    return best


# ---------------------------------------------------------------- zero-set discovery


_INJECTIVE_AT_ZERO = {"sin", "tan"}
_EVEN_AT_ZERO = {"cos", "sec"}


def detect_zero_set(den: Expr, variables: Sequence[str], point: Mapping[str, Fraction]) -> ZeroSetSpec | None:
    """Recognise ``c*(phi(a) - phi(b))`` and emit the curves where it vanishes."""
    _, rest = split_coeff(den)
    terms = additive_terms(distribute_constants(rest if rest is not None else den))
    if len(terms) != 2:
        return None
    (c1, r1), (c2, r2) = (split_coeff(t) for t in terms)
    if c1 != -c2 or not isinstance(r1, Func) or not isinstance(r2, Func) or r1.name != r2.name:
        return None
    name, a, b = r1.name, r1.arg, r2.arg
    va, vb = exact_value(a, point), exact_value(b, point)
    if va is None or vb is None or va != vb:
        return None
    if name == "exp":
        eqs = [sub(a, b)]
    elif name in _INJECTIVE_AT_ZERO and va == 0:
        eqs = [sub(a, b)]
    elif name in _EVEN_AT_ZERO and va == 0:
        eqs = [sub(a, b), add(a, b)]
    else:
        return None
    return ZeroSetSpec([ImplicitCurve(distribute_constants(e)) for e in eqs], [], source="pattern")


def default_components(spec: ZeroSetSpec, variables, point, den=None, seed: int = 0) -> list:
    """Sign-vector cells of the implicit equations; empty cells are dropped."""
    eqs = [c.equation for c in spec.curves if isinstance(c, ImplicitCurve)]
    if not eqs:
        return [ComponentSpec("all")]
    out = []
    for signs in itertools.product((1, -1), repeat=len(eqs)):
        region = [e if s > 0 else distribute_constants(mul(-1, e)) for e, s in zip(eqs, signs)]
        label = ",".join("+" if s > 0 else "-" for s in signs)
        comp = ComponentSpec(f"({label})", None, region)
        if len(component_samples(comp, variables, point, den=den, seed=seed)):
            out.append(comp)
    return out


# ---------------------------------------------------------------- resolution


@dataclass
class ComponentResult:
    component: ComponentSpec
    direction: tuple | None
    verdict: Verdict
    quotient: tuple | None = None  # (D_v f, D_v g) with primitive v


def _choose_direction(problem, spec, comp, pm, cert, seed):
    n = len(problem.variables)
    candidates = [comp.direction] if comp.direction is not None else [
        tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)
    ]
    failures = []
    for v in candidates:
        v = primitive_direction(v)
        ok, tcert = check_transversality(spec, v, pm, problem.variables)
        if not ok:
            failures.append(f"v={_vec(v)}: " + ("tangent" if ok is False else "curve not smooth"))
            continue
        res = falsify_nonvanishing(problem.denominator, v, comp, problem.variables, pm, seed=seed)
        if res.counterexample is not None:
            where = _vec([Fraction(x).limit_denominator(10**6) for x in res.counterexample])
            failures.append(f"v={_vec(v)}: D_v g vanishes near {where} ({res.note})")
            continue
        cert.extend(tcert)
        cert.add("nonvanishing-derivative", f"component {comp.id}: D_v g = {res.derivative}",
                 res.note if res.status is Status.PROVED else f"D_v g != 0 assumed: {res.note}",
                 res.status)
        return v, failures
    return None, failures


def _component_side(comp, variables, pm, name, den, seed) -> int:
    """+1 / -1 if the component lies on one side of ``name = p``, else 0."""
    pts = component_samples(comp, variables, pm, den=den, seed=seed)
    idx = list(variables).index(name)
    offs = pts[:, idx] - float(pm[name])
    if np.all(offs > 0):
        return 1
    if np.all(offs < 0):
        return -1
    return 0


def _quotient_limit(problem: LimitProblem, comp, num: Expr, den: Expr, pm, depth: int, seed: int,
                    resolver: Callable | None) -> Verdict:
    cert = Certificate()
    gv = exact_value(den, pm)
    if gv is not None and gv != 0:
        fv = exact_value(num, pm)
        if fv is not None:
            cert.add("continuity", f"({num}) / ({den}) at the point", f"continuous, value {format_value(fv / gv)}")
            return Verdict.exists(fv / gv, cert)
    if gv is None or gv != 0:
        at = {k: float(c) for k, c in pm.items()}
        fl, gl = evaluate(num, at), evaluate(den, at)
        if is_defined(fl) and is_defined(gl) and gl != 0:
            cert.add("continuity", f"({num}) / ({den}) at the point", f"continuous, value {fl / gl!r}")
            return Verdict.exists(fl / gl, cert)
    names = set(free_variables(num)) | set(free_variables(den))
    if len(names) == 1:
        (x,) = names
        side = _component_side(comp, problem.variables, pm, x, problem.denominator, seed)
        shift = {x: add(Var(x), pm[x])}
        n0, d0 = substitute(num, shift), substitute(den, shift)
        if side > 0:
            res = univariate_limit(n0, d0, x)
        elif side < 0:
            flip = {x: mul(-1, Var(x))}
            res = univariate_limit(substitute(n0, flip), substitute(d0, flip), x)
        else:
            res = two_sided_limit(n0, d0, x)
        cert.extend(res.certificate)
        if res.is_exists:
            cert.add("one-variable-reduction", f"({num}) / ({den}) in {x}",
                     f"limit {format_value(res.value)}")
            return Verdict.exists(res.value, cert)
        return Verdict.inconclusive(f"one-variable reduction gave: {res}", cert)
    if depth >= MAX_DEPTH:
        return Verdict.inconclusive("recursion depth exhausted")
    if resolver is None:
        return Verdict.inconclusive("quotient is again 0/0 and no recursive resolver is available")
    sub_problem = LimitProblem(num, den, problem.variables, problem.point)
    res = resolver(sub_problem, depth + 1)
    cert.extend(res.certificate)
    if res.is_exists:
        return Verdict.exists(res.value, cert)
    return Verdict.inconclusive(f"quotient is again 0/0; recursive attempt: {res}", cert)


def resolve_nonisolated(problem: LimitProblem, spec: ZeroSetSpec | None = None, depth: int = 0,
                        seed: int = 0, resolver: Callable | None = None) -> Verdict:
    """Limit of ``f/g`` when ``g`` vanishes on a curve through the point."""
    pm = problem.point_map
    cert = Certificate()
    if spec is None:
        spec = detect_zero_set(problem.denominator, problem.variables, pm)
        if spec is None:
            return Verdict.inconclusive("no zero set supplied and none recognised")
    if not spec.curves:
        return Verdict.inconclusive("zero set has no curves")
    status = Status.PROVED if spec.source == "pattern" else Status.ASSUMED
    cert.add(
        "zero-set",
        "; ".join(c.describe() for c in spec.curves),
        "denominator vanishes near the point exactly on these curves"
        + (" (injective function pattern)" if spec.source == "pattern" else " (as supplied)"),
        status,
    )
    comps = spec.components or default_components(spec, problem.variables, pm, problem.denominator, seed)
    if not comps:
        return Verdict.inconclusive("every component is empty in sampling", cert)
    results: list[ComponentResult] = []
    for comp in comps:
        try:
            v, failures = _choose_direction(problem, spec, comp, pm, cert, seed)
        except EmptyComponentError as exc:
            return Verdict.inconclusive(str(exc), cert)
        if v is None:
            return Verdict.inconclusive(
                f"component {comp.id}: no admissible direction ({'; '.join(failures)})", cert
            )
        dvf = directional_derivative(problem.numerator, v, problem.variables)
        dvg = directional_derivative(problem.denominator, v, problem.variables)
        res = _quotient_limit(problem, comp, dvf, dvg, pm, depth, seed, resolver)
        cert.extend(res.certificate)
        if not res.is_exists:
            return Verdict.inconclusive(f"component {comp.id}: {res.reason}", cert)
        cert.add(
            "transversal-lhopital",
            f"component {comp.id} ({comp.describe()}), v={_vec(v)}: ({dvf}) / ({dvg})",
            f"limit over the component is {format_value(res.value)}",
        )
        results.append(ComponentResult(comp, v, res, (dvf, dvg)))
    details = {"components": results, "quotients": {r.component.id: r.quotient for r in results}}
    values = [r.verdict.value for r in results]
    if all(_same(values[0], x) for x in values[1:]):
        cert.add("component-agreement", ", ".join(r.component.id for r in results),
                 f"all component limits equal {format_value(values[0])}")
        return Verdict.exists(values[0], cert, details=details)
    a, b = next((r, s) for r in results for s in results if not _same(r.verdict.value, s.verdict.value))
    witnesses = [w for w in (_component_witness(problem, r, seed) for r in (a, b)) if w is not None]
    cert.add("component-disagreement", f"{a.component.id} vs {b.component.id}",
             f"limits {format_value(a.verdict.value)} and {format_value(b.verdict.value)} differ")
    return Verdict.does_not_exist(witnesses, cert, reason="component limits differ", details=details)


def _same(a, b) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(float(a) - float(b)) <= 1e-12 * max(1.0, abs(float(a)))


def _component_witness(problem: LimitProblem, r: ComponentResult, seed: int) -> Witness | None:
    """Straight line from the point through a sampled component point."""
    pm = problem.point_map
    pts = component_samples(r.component, problem.variables, pm, den=problem.denominator, seed=seed)
    if not len(pts):
        return None
    t = Var("t")
    d = [Fraction(float(c) - float(pm[x])).limit_denominator(64) for x, c in zip(problem.variables, pts[0])]
    path = {x: add(pm[x], mul(c, t)) for x, c in zip(problem.variables, d)}
    lim = restricted_limit(problem.numerator, problem.denominator, path)
    return Witness(path, lim.value if lim.is_exists else None, f"line into {r.component.id}")
