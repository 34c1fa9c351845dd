from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from mvlim.lp import LPInfeasible, LPUnbounded, maximize
from support import random_lp_instance, vertex_enumeration_max

F = Fraction


def test_polar_bound_for_x3y3_over_x6_y4():
    # squares x^3, y^2; term x^3 y^3
    res = maximize([1, 1], [[3, 0], [0, 2]], [3, 3])
    assert res.value == F(5, 2)
    assert res.x == (F(1), F(3, 2))


def test_rejected_decomposition_value():
    # squares x^3, y^3; term x^3 y^2
    assert maximize([1, 1], [[3, 0], [0, 3]], [3, 2]).value == F(5, 3)


def test_accepted_decomposition_value():
    # squares x^3, x*y; term x^3 y^2
    assert maximize([1, 1], [[3, 1], [0, 1]], [3, 2]).value == F(7, 3)


def test_unbounded():
    with pytest.raises(LPUnbounded):
        maximize([1, 1], [[1, 0]], [1])


def test_infeasible():
    with pytest.raises(LPInfeasible):
        maximize([1], [[1], [-1]], [-1, -2])


def test_degenerate_zero_rhs():
    assert maximize([1, 1], [[1, 1], [1, 0]], [0, 0]).value == 0


@pytest.mark.parametrize("seed", range(5))
def test_matches_vertex_enumeration(seed):
    rng = np.random.default_rng(seed)
    for _ in range(20):
        c, A, b = random_lp_instance(rng)
        assert maximize(c, A, b).value == vertex_enumeration_max(c, A, b)
