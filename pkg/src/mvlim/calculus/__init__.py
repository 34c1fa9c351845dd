"""Differentiation, substitution, Puiseux expansion and univariate limits."""

from ..expr import substitute
from .diff import differentiate, directional_derivative, gradient, primitive_direction
from .limits import (
    NotReducible,
    SeriesApprox,
    leading_term,
    restricted_limit,
    taylor_leading,
    two_sided_limit,
    univariate_limit,
)
from .series import (
    INF,
    InsufficientOrder,
    PuiseuxSeries,
    SeriesError,
    expand,
    puiseux_expand,
    series_add,
    series_from_terms,
    series_mul,
    series_pow,
)

__all__ = [
    "substitute", "differentiate", "directional_derivative", "gradient", "primitive_direction",
    "NotReducible", "SeriesApprox", "leading_term", "restricted_limit", "taylor_leading",
    "two_sided_limit", "univariate_limit", "INF", "InsufficientOrder", "PuiseuxSeries",
    "SeriesError", "expand", "puiseux_expand", "series_add", "series_from_terms",
    "series_mul", "series_pow",
]
