"""Isolated singular points: axis probe, separation, squares, curve probe, polar bound."""

from .curve import CurveProbe, Unsolvable, curve_probe, solve_triangular, verify_solution
from .resolver import parse_hints, resolve_isolated
from .squares import (
    PolarBoundCertificate,
    SquareDecomposition,
    enumerate_square_decompositions,
    identity_holds,
    polar_degree_bound,
)
from .steps import PreliminaryProbeResult, preliminary_probe, separate
from .taylor import TaylorReplacement, taylor_replace

__all__ = [
    "CurveProbe", "Unsolvable", "curve_probe", "solve_triangular", "verify_solution",
    "parse_hints", "resolve_isolated", "PolarBoundCertificate", "SquareDecomposition",
    "enumerate_square_decompositions", "identity_holds", "polar_degree_bound",
    "PreliminaryProbeResult", "preliminary_probe", "separate", "TaylorReplacement", "taylor_replace",
]
