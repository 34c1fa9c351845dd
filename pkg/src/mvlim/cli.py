"""Command-line front end: ``mvlim resolve`` and ``mvlim probe``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .calculus import limits as _limits
from .expr import ParseError, as_quotient, parse
from .oracle import AllPathsRejected, EstimateReport, random_path_suite
from .resolve import resolve
from .transversal import ZeroSetSpec
from .verdict import Certificate, Kind, LimitProblem, Verdict, format_value

EXIT_CONCLUSIVE = 0
EXIT_INPUT_ERROR = 1
EXIT_INCONCLUSIVE = 2

_STEP = {
    "type": "object",
    "required": ["step", "tag", "inputs", "claim", "status"],
    "properties": {
        "step": {"type": "integer", "minimum": 1},
        "tag": {"type": "string"},
        "inputs": {"type": "string"},
        "claim": {"type": "string"},
        "status": {"enum": ["proved-exact", "checked-numerically", "assumed"]},
    },
    "additionalProperties": False,
}

RESULT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["verdict", "certificate", "oracle"],
    "properties": {
        "verdict": {"enum": ["exists", "does_not_exist", "inconclusive"]},
        "value": {"type": "string"},
        "witnesses": {"type": "array", "items": {"type": "string"}},
        "reason": {"type": "string"},
        "certificate": {"type": "array", "items": _STEP},
        "oracle": {"type": "object"},
    },
    "allOf": [
        {
            "if": {"properties": {"verdict": {"const": "exists"}}},
            "then": {"required": ["value"], "not": {"required": ["witnesses"]}},
            "else": {"not": {"required": ["value"]}},
        },
        {
            "if": {"properties": {"verdict": {"const": "does_not_exist"}}},
            "then": {"required": ["witnesses"]},
        },
    ],
    "additionalProperties": False,
}


class InputError(ValueError):
    pass


@dataclass
class Query:
    numerator: str
    denominator: str
    variables: list
    point: list
    mode: str = "auto"
    zero_set: dict | None = None
    decomp: object = None
    seed: int = 0
    paths: int = 20
    output: str = "text"
    max_decomps: int = 16
    order: Fraction | None = None
    oracle: bool = True
    extra: dict = field(default_factory=dict)

    def problem(self) -> LimitProblem:
        try:
            num, den = parse(self.numerator), parse(self.denominator)
        except ParseError as exc:
            raise InputError(f"cannot parse expression: {exc}") from exc
        try:
            return LimitProblem(num, den, tuple(self.variables), tuple(self.point))
        except ValueError as exc:
            raise InputError(str(exc)) from exc


def _rational(text: str) -> Fraction:
    s = text.strip()
    if "." in s or "e" in s.lower():
        raise InputError(f"coordinates must be exact rationals, got {text!r}")
    try:
        return Fraction(s)
    except ValueError as exc:
        raise InputError(f"not a rational number: {text!r}") from exc


def _json_arg(text: str | None, flag: str):
    if text is None:
        return None
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{flag}: invalid JSON ({exc})") from exc


def query_from_args(args: argparse.Namespace) -> Query:
    if args.expr is not None:
        if args.num is not None or args.den is not None:
            raise InputError("use either --expr or --num/--den")
        try:
            n, d = as_quotient(parse(args.expr))
        except ParseError as exc:
            raise InputError(f"cannot parse expression: {exc}") from exc
        num, den = str(n), str(d)
    else:
        if args.num is None or args.den is None:
            raise InputError("need --num and --den, or --expr")
        num, den = args.num, args.den
    variables = [v.strip() for v in args.vars.split(",") if v.strip()]
    point = [_rational(c) for c in args.point.split(",")]
    if len(point) != len(variables):
        raise InputError(f"point has {len(point)} coordinates for {len(variables)} variables")
    seed = args.seed if args.seed is not None else int(os.environ.get("MVLIM_SEED", "0"))
    return Query(
        num, den, variables, point,
        mode=getattr(args, "mode", "probe"),
        zero_set=_json_arg(getattr(args, "zero_set", None), "--zero-set"),
        decomp=_json_arg(getattr(args, "decomp", None), "--decomp"),
        seed=seed,
        paths=args.paths,
        output="json" if args.json else "text",
        max_decomps=getattr(args, "max_decomps", 16),
        order=_rational(args.order) if getattr(args, "order", None) else None,
        oracle=not getattr(args, "no_oracle", False),
    )


def render_certificate(cert: Certificate, fmt: str = "text"):
    """Numbered steps as text lines, or the JSON list used in results."""
    items = [s.to_dict(i) for i, s in enumerate(cert.steps, 1)]
    if fmt == "json":
        return items
    return "\n".join(
        f"  {d['step']}. [{d['tag']}] {d['claim']}\n     on: {d['inputs']}\n     status: {d['status']}"
        for d in items
    )


def _witness_text(w) -> str:
    s = w.describe()
    if w.limit is not None:
        s += f"  (limit {format_value(w.limit)})"
    return s


def result_dict(verdict: Verdict, report: EstimateReport | None = None, oracle_error: str | None = None) -> dict:
    out: dict = {"verdict": verdict.kind.value}
    if verdict.is_exists:
        out["value"] = format_value(verdict.value)
    if verdict.is_dne:
        out["witnesses"] = [_witness_text(w) for w in verdict.witnesses]
    if verdict.reason:
        out["reason"] = verdict.reason
    out["certificate"] = render_certificate(verdict.certificate, "json")
    if report is not None:
        out["oracle"] = report.to_dict()
    elif oracle_error:
        out["oracle"] = {"error": oracle_error}
    else:
        out["oracle"] = {}
    return out


def render_text(verdict: Verdict, report: EstimateReport | None = None, oracle_error: str | None = None) -> str:
    lines = []
    if verdict.is_exists:
        lines.append(f"verdict: exists\nvalue: {format_value(verdict.value)}")
    elif verdict.is_dne:
        lines.append("verdict: does_not_exist")
        if verdict.reason:
            lines.append(f"reason: {verdict.reason}")
        for i, w in enumerate(verdict.witnesses, 1):
            lines.append(f"witness {i}: {_witness_text(w)}")
    else:
        lines.append(f"verdict: inconclusive\nreason: {verdict.reason}")
    if verdict.certificate.steps:
        lines.append("certificate:")
        lines.append(render_certificate(verdict.certificate))
    if report is not None:
        lines.append(f"oracle: {report} ({len(report.paths)} paths, seed {report.seed})")
    elif oracle_error:
        lines.append(f"oracle: {oracle_error}")
    return "\n".join(lines)


def _oracle(problem: LimitProblem, q: Query):
    try:
        return random_path_suite(problem.numerator, problem.denominator, problem.variables,
                                 problem.point, q.paths, q.seed), None
    except AllPathsRejected as exc:
        return None, str(exc)


def run(q: Query, out=None) -> int:
    """Execute a query, write the rendering to ``out`` and return the exit code."""
    out = out if out is not None else sys.stdout
    problem = q.problem()
    if q.mode == "probe":
        if q.paths < 8:
            raise InputError("--paths must be at least 8")
        report, err = _oracle(problem, q)
        if q.output == "json":
            out.write(json.dumps(report.to_dict() if report else {"error": err}, indent=2) + "\n")
        else:
            if report is None:
                out.write(f"oracle: {err}\n")
            else:
                out.write(f"suggestion: {report}\n")
                for p, d in zip(report.paths, report.descriptions):
                    est = "unbounded" if p.unbounded else (f"{p.estimate:.10g}" if p.estimate is not None else "none")
                    out.write(f"  {p.label:12s} {est:>18s}  {d}\n")
                for n in report.notes:
                    out.write(f"note: {n}\n")
        return EXIT_CONCLUSIVE if report is not None and report.suggestion != "noisy" else EXIT_INCONCLUSIVE
    try:
        spec = ZeroSetSpec.from_json(q.zero_set) if q.zero_set is not None else None
    except (KeyError, TypeError, ValueError, ParseError) as exc:
        raise InputError(f"--zero-set: {exc}") from exc
    saved = _limits.DEFAULT_START_ORDER
    if q.order is not None:
        _limits.DEFAULT_START_ORDER = q.order
    try:
        verdict = resolve(problem, q.mode, spec, q.decomp, q.max_decomps, q.seed)
    except (KeyError, TypeError, ParseError) as exc:
        raise InputError(f"bad hint: {exc}") from exc
    finally:
        _limits.DEFAULT_START_ORDER = saved
    report, err = (None, None)
    if q.oracle and q.paths >= 8:
        report, err = _oracle(problem, q)
    if q.output == "json":
        out.write(json.dumps(result_dict(verdict, report, err), indent=2) + "\n")
    else:
        out.write(render_text(verdict, report, err) + "\n")
    return EXIT_CONCLUSIVE if verdict.kind is not Kind.INCONCLUSIVE else EXIT_INCONCLUSIVE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mvlim", description="Resolve 0/0 limits of multivariable functions.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--num", help="numerator expression")
        p.add_argument("--den", help="denominator expression")
        p.add_argument("--expr", help="a single quotient, split into numerator and denominator")
        p.add_argument("--vars", required=True, help="comma-separated variable names")
        p.add_argument("--point", required=True, help="comma-separated rational coordinates")
        p.add_argument("--paths", type=int, default=20, help="number of oracle paths (default 20)")
        p.add_argument("--seed", type=int, default=None, help="oracle seed (default $MVLIM_SEED or 0)")
        p.add_argument("--json", action="store_true", help="emit JSON")

    r = sub.add_parser("resolve", help="symbolic verdict with certificate")
    common(r)
    r.add_argument("--mode", choices=["auto", "nonisolated", "isolated", "probe"], default="auto")
    r.add_argument("--zero-set", dest="zero_set", help="zero-set JSON (or @file)")
    r.add_argument("--decomp", help="square decomposition hint JSON (or @file)")
    r.add_argument("--max-decomps", dest="max_decomps", type=int, default=16)
    r.add_argument("--order", help="starting series truncation order")
    r.add_argument("--no-oracle", dest="no_oracle", action="store_true", help="skip the numeric cross-check")

    p = sub.add_parser("probe", help="numeric path sampling only")
    common(p)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors, which would read as "inconclusive"
        return EXIT_INPUT_ERROR if exc.code else 0
    try:
        q = query_from_args(args)
        if args.command == "probe":
            q.mode = "probe"
        return run(q)
    except (InputError, OSError) as exc:
        print(f"mvlim: error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
