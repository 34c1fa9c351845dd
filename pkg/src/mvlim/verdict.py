"""Verdicts, witness paths and certificate traces shared by every resolver."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .expr import Expr, Var, as_expr, free_variables, make_point, parse


class Kind(str, Enum):
    EXISTS = "exists"
    DOES_NOT_EXIST = "does_not_exist"
    INCONCLUSIVE = "inconclusive"


class Status(str, Enum):
    PROVED = "proved-exact"
    NUMERIC = "checked-numerically"
    ASSUMED = "assumed"


@dataclass
class Step:
    tag: str
    inputs: str
    claim: str
    status: Status = Status.PROVED

    def to_dict(self, index: int) -> dict:
        return {
            "step": index,
            "tag": self.tag,
            "inputs": self.inputs,
            "claim": self.claim,
            "status": self.status.value,
        }


@dataclass
class Certificate:
    steps: list[Step] = field(default_factory=list)

    def add(self, tag: str, inputs: str, claim: str, status: Status = Status.PROVED) -> Step:
        step = Step(tag, inputs, claim, status)
        self.steps.append(step)
        return step

    def extend(self, other: "Certificate") -> None:
        self.steps.extend(other.steps)

    def has_proved_step(self) -> bool:
        return any(s.status is Status.PROVED for s in self.steps)

    def assumptions(self) -> list[Step]:
        return [s for s in self.steps if s.status is Status.ASSUMED]


@dataclass
class Witness:
    """A curve ``x = path(t)`` reaching the point as ``t -> 0+``."""

    path: dict  # variable -> Expr in t
    limit: Any = None  # Fraction, float, or "+inf"/"-inf"
    label: str = ""

    def describe(self) -> str:
        return ", ".join(f"{v}={e}" for v, e in self.path.items())


@dataclass
class Verdict:
    kind: Kind
    value: Any = None  # Fraction or float when kind is EXISTS
    witnesses: list[Witness] = field(default_factory=list)
    reason: str = ""
    certificate: Certificate = field(default_factory=Certificate)
    divergence: int | None = None  # sign of an unbounded restricted limit
    details: dict = field(default_factory=dict)

    @classmethod
    def exists(cls, value, certificate: Certificate | None = None, **kw) -> "Verdict":
        return cls(Kind.EXISTS, value=value, certificate=certificate or Certificate(), **kw)

    @classmethod
    def does_not_exist(cls, witnesses=(), certificate=None, reason="", **kw) -> "Verdict":
        return cls(
            Kind.DOES_NOT_EXIST,
            witnesses=list(witnesses),
            reason=reason,
            certificate=certificate or Certificate(),
            **kw,
        )

    @classmethod
    def inconclusive(cls, reason: str, certificate: Certificate | None = None, **kw) -> "Verdict":
        return cls(Kind.INCONCLUSIVE, reason=reason, certificate=certificate or Certificate(), **kw)

    @property
    def is_exists(self) -> bool:
        return self.kind is Kind.EXISTS

    @property
    def is_dne(self) -> bool:
        return self.kind is Kind.DOES_NOT_EXIST

    @property
    def is_conclusive(self) -> bool:
        return self.kind is not Kind.INCONCLUSIVE

    def __str__(self) -> str:
        if self.kind is Kind.EXISTS:
            return f"exists: {format_value(self.value)}"
        if self.kind is Kind.DOES_NOT_EXIST:
            return f"does not exist ({self.reason})" if self.reason else "does not exist"
        return f"inconclusive: {self.reason}"


def format_value(value) -> str:
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass(frozen=True)
class LimitProblem:
    """Limit of ``numerator/denominator`` as ``variables -> point``."""

    numerator: Expr
    denominator: Expr
    variables: tuple
    point: tuple  # exact coordinates, same order as ``variables``

    def __post_init__(self):
        if len(self.variables) != len(self.point):
            raise ValueError(
                f"point has {len(self.point)} coordinates for {len(self.variables)} variables"
            )
        names = set(free_variables(self.numerator)) | set(free_variables(self.denominator))
        missing = names - set(self.variables)
        if missing:
            raise ValueError(f"variables {sorted(missing)} have no coordinate")
        object.__setattr__(self, "point", tuple(Fraction(c) for c in self.point))

    @classmethod
    def from_strings(cls, numerator: str, denominator: str, variables: Sequence[str], point: Sequence) -> "LimitProblem":
        return cls(parse(numerator), parse(denominator), tuple(variables), tuple(Fraction(c) for c in point))

    @property
    def point_map(self) -> dict:
        return make_point(self.variables, self.point)

    @property
    def at_origin(self) -> bool:
        return all(c == 0 for c in self.point)

    def translated(self) -> "LimitProblem":
        """Equivalent problem at the origin."""
        from .expr import to_origin

        if self.at_origin:
            return self
        pm = self.point_map
        return LimitProblem(
            to_origin(self.numerator, pm),
            to_origin(self.denominator, pm),
            self.variables,
            tuple(Fraction(0) for _ in self.variables),
        )

    def with_numerator(self, numerator: Expr) -> "LimitProblem":
        return LimitProblem(numerator, self.denominator, self.variables, self.point)

    def with_denominator(self, denominator: Expr) -> "LimitProblem":
        return LimitProblem(self.numerator, denominator, self.variables, self.point)

    def describe(self) -> str:
        at = ", ".join(f"{v}={c}" for v, c in zip(self.variables, self.point))
        return f"({self.numerator}) / ({self.denominator}) as ({at})"
