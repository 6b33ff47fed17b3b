import math
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from amoebakit.poly import parse
from amoebakit.series import (
    BudgetExceeded,
    NotGraded,
    diagonal,
    expand,
    expansion_spec,
    morse_prefactor_check,
    order_map,
    rate_check,
)

from conftest import example1

V = ["z1", "z2"]
LINE = parse("1 - z1 - z2", V)


def test_binomial_coefficients_at_origin():
    spec = expansion_spec(LINE, (0, 0))
    table = expand(spec, 12)
    for i in range(6):
        for j in range(6):
            assert table[(i, j)] == comb(i + j, i)


def test_diagonal_is_central_binomial():
    spec = expansion_spec(LINE, (0, 0))
    table = expand(spec, 20)
    assert diagonal(table, (1, 1), 10) == [comb(2 * k, k) for k in range(11)]


def test_budget_is_enforced():
    table = expand(expansion_spec(LINE, (0, 0)), 4)
    with pytest.raises(BudgetExceeded):
        table[(3, 3)]


def test_expansion_at_another_vertex():
    # around the term -z1: 1/f = -z1^{-1} sum ((1 - z2)/z1)^k
    spec = expansion_spec(LINE, (1, 0))
    table = expand(spec, 6)
    assert table[(-1, 0)] == -1
    assert table[(-2, 0)] == -1
    assert table[(-2, 1)] == 1


def test_interior_point_has_no_grading():
    with pytest.raises(NotGraded):
        expansion_spec(example1("3/100"), (1, 1))


def test_series_times_f_is_one():
    f = example1("3/100")
    spec = expansion_spec(f, (0, 0))
    table = expand(spec, 9)
    prod = table.as_poly() * f
    # low-level terms of the product are exactly 1
    for e, c in prod.items():
        if spec.level(e) <= 6:
            assert (e == (0, 0) and c == 1) or c == 0


def test_order_map_of_line():
    assert order_map(LINE, (-2.0, -2.0)) == (0, 0)
    assert order_map(LINE, (3.0, -1.0)) == (1, 0)
    assert order_map(LINE, (-1.0, 3.0)) == (0, 1)


def test_rate_for_line():
    rep = rate_check(LINE, (0, 0), (1, 1), 200)
    assert rep.empirical == pytest.approx(4, rel=1e-3)
    assert rep.predicted == pytest.approx(4, rel=1e-12)
    assert not rep.oscillating


def test_prefactor_for_line():
    rep = morse_prefactor_check(LINE, (0, 0), (1, 1), 200)
    assert rep.plateau == pytest.approx(1 / math.sqrt(math.pi), rel=0.01)
    assert rep.stable


def test_univariate_rate():
    rep = rate_check(parse("1 - 3*z1", ["z1"]), (0,), (1,), 40)
    assert rep.empirical == pytest.approx(3, rel=1e-9)
    assert rep.predicted == pytest.approx(3)


@given(st.integers(1, 5), st.integers(1, 5))
def test_line_diagonals_are_binomials(a, b):
    spec = expansion_spec(LINE, (0, 0))
    table = expand(spec, 5 * (a + b), target=(5 * a, 5 * b))
    assert diagonal(table, (a, b), 5) == [comb(k * (a + b), k * a) for k in range(6)]
