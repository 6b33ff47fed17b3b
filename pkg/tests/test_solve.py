from fractions import Fraction

import numpy as np
import pytest

from amoebakit.localalg import NotIsolated, local_dimension, local_dimension_numeric
from amoebakit.poly import parse
from amoebakit.solve import solve_torus

V = ["x", "y"]


def test_solve_torus_counts_bezout_solutions():
    eqs = [parse("x^2 + y^2 - 5", V), parse("x*y - 2", V)]
    sols = solve_torus(eqs, [0, 1])
    pts = sorted((round(s.as_complex()[0].real, 9), round(s.as_complex()[1].real, 9)) for s in sols)
    assert pts == [(-2, -1), (-1, -2), (1, 2), (2, 1)]


def test_solve_torus_drops_points_off_torus():
    eqs = [parse("x*y", V), parse("x + y - 1", V)]
    assert len(solve_torus(eqs, [0, 1])) == 0


def test_local_dimension_cusp_and_node():
    # gradient ideals: node xy has mu 1, cusp y^2 - x^3 has mu 2
    assert local_dimension([parse("y", V), parse("x", V)], (0, 0)) == 1
    assert local_dimension([parse("3*x^2", V), parse("2*y", V)], (0, 0)) == 2
    assert local_dimension([parse("x^3", V), parse("y^2", V)], (0, 0)) == 6


def test_local_dimension_off_variety():
    assert local_dimension([parse("x - 1", V), parse("y", V)], (0, 0)) == 0


def test_local_dimension_translated_point():
    p = (Fraction(1, 2), Fraction(-3))
    eqs = [parse("(x - 1/2)^2", V), parse("(y + 3)", V)]
    assert local_dimension(eqs, p) == 2


def test_non_isolated_point_raises():
    with pytest.raises(NotIsolated):
        local_dimension([parse("x*y", V), parse("x^2*y", V)], (0, 0), max_order=6)


def test_numeric_local_dimension_matches_exact():
    eqs = [parse("(x - 1/2)^2 + (y - 1)^3", V), parse("(y - 1)", V)]
    assert local_dimension(eqs, (Fraction(1, 2), 1)) == 2
    assert local_dimension_numeric(eqs, np.array([0.5, 1.0])) == 2
