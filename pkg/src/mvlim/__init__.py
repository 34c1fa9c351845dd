"""Exact resolution of 0/0 limits of multivariable real functions."""

from .expr import ParseError, parse
from .oracle import EstimateReport, PathSpec, estimate_path_limit, random_path_suite
from .resolve import resolve
from .transversal import ComponentSpec, ZeroSetSpec, resolve_nonisolated
from .isolated import SquareDecomposition, resolve_isolated
from .verdict import Certificate, Kind, LimitProblem, Status, Step, Verdict, Witness

__version__ = "0.1.0"

__all__ = [
    "ParseError", "parse", "EstimateReport", "PathSpec", "estimate_path_limit", "random_path_suite",
    "resolve", "ComponentSpec", "ZeroSetSpec", "resolve_nonisolated", "SquareDecomposition",
    "resolve_isolated", "Certificate", "Kind", "LimitProblem", "Status", "Step", "Verdict", "Witness",
]
