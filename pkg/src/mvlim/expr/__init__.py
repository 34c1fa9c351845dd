"""Expression data model: nodes, parser, printer, evaluation, polynomials."""

from fractions import Fraction
from typing import Dict, Mapping, Sequence

from .core import (
    FUNCTIONS,
    ONE,
    ZERO,
    Add,
    Const,
    Expr,
    Func,
    Mul,
    Neg,
    Pow,
    Var,
    add,
    additive_terms,
    as_expr,
    as_quotient,
    canonicalize,
    const,
    contains_func,
    distribute_constants,
    div,
    free_variables,
    func,
    is_nonnegative,
    mul,
    multiplicative_factors,
    neg,
    power,
    rational_power,
    sign_parity,
    split_coeff,
    sub,
    substitute,
    var,
)
from .evaluate import UNDEFINED, UnassignedVariable, evaluate, evaluate_array, evaluate_mp, exact_value, is_defined
from .parser import ParseError, parse
from .poly import Monomial, as_polynomial, from_monomials, from_poly, is_zero_expr, to_poly
from .printer import to_string

Point = Dict[str, Fraction]


def make_point(variables: Sequence[str], coords: Sequence) -> Point:
    if len(variables) != len(coords):
        raise ValueError(
            f"point has {len(coords)} coordinates for {len(variables)} variables"
        )
    return {v: Fraction(c) for v, c in zip(variables, coords)}


def to_origin(e: Expr, point: Mapping[str, Fraction]) -> Expr:
    """Translate so that ``point`` becomes the origin (``x -> x + p``)."""
    shift = {v: add(Var(v), c) for v, c in point.items() if c != 0}
    return substitute(e, shift) if shift else e


__all__ = [
    "FUNCTIONS", "ONE", "ZERO", "Add", "Const", "Expr", "Func", "Mul", "Neg", "Pow", "Var",
    "add", "additive_terms", "as_expr", "as_quotient", "canonicalize", "const",
    "contains_func", "distribute_constants", "div", "free_variables", "func", "is_nonnegative", "mul",
    "multiplicative_factors", "neg", "power", "rational_power", "sign_parity", "split_coeff", "sub",
    "substitute", "var", "UNDEFINED", "UnassignedVariable", "evaluate", "evaluate_array",
    "evaluate_mp", "is_defined", "exact_value", "ParseError", "parse", "Monomial", "as_polynomial",
    "from_monomials", "from_poly", "is_zero_expr", "to_poly", "to_string", "Point",
    "make_point", "to_origin",
]
