import math
import random
from fractions import Fraction

import numpy as np
import pytest

from amoebakit.elim import sturm_real_root_count
from amoebakit.gauss import (
    ProjectiveDirection,
    fiber,
    fiber_numeric,
    fiber_system,
    gauss_degree,
    gauss_discriminant,
    projection_polynomial,
)
from amoebakit.poly import parse

from conftest import EX1, example1


def test_direction_parsing():
    y = ProjectiveDirection.parse("1:3:1")
    assert y.coords == (1, 3, 1) and y.n == 3 and y.chart == 2
    assert ProjectiveDirection.parse("1/2:3").coords == (1, 6)
    with pytest.raises(ValueError):
        ProjectiveDirection((0, 0))


def test_degrees(ex2):
    assert gauss_degree(example1("3/100")) == 3
    assert gauss_degree(ex2) == 6


def test_fiber_system_equation():
    f = example1("3/100")
    sys_ = fiber_system(f, (1, 3))
    (h,) = sys_.equations
    expected = 3 * f.euler_derivative(0) - f.euler_derivative(1)
    assert h in (expected, -expected)


def test_symbolic_projection_has_degree_three_in_z1():
    fs = parse(EX1.format(a="a"), ["z1", "z2", "a"])
    P = projection_polynomial(fs, 0, nparams=1)
    assert P.degree(0) == 3
    assert P.degree(1) == 0


def test_fiber_example1():
    r = fiber(example1("3/100"), (1, 3))
    assert len(r) == 3 and r.deficit == 0
    exact = [p for p in r if p.is_exact]
    assert [p.coords for p in exact] == [(Fraction(3, 10), Fraction(1, 2))]
    s = math.sqrt(57)
    others = sorted(tuple(p.as_complex().real) for p in r if not p.is_exact)
    expected = sorted([(7 / 40 - s / 40, 9 / 8 + s / 8), (7 / 40 + s / 40, 9 / 8 - s / 8)])
    assert np.allclose(others, expected, atol=1e-10)


def test_fiber_numeric_agrees():
    pts = fiber_numeric(example1("3/100"), [1.0, 3.0])
    assert len(pts) == 3
    f = example1("3/100")
    for z, sigma in pts:
        assert abs(f.eval_float(list(z))) < 1e-10
        assert sigma > 1e-3  # simple points have a well-conditioned Jacobian


def test_discriminant_example1_positive_a():
    res = gauss_discriminant(example1("3/100"))
    d0 = res.d0
    assert d0.is_homogeneous() and d0.total_degree() == 6
    D = d0.substitute(1, 1)
    assert sturm_real_root_count(D, 0) == 0
    # the lc factor y1 - 2 y2 style terms are filtered out
    assert any(not r.kept for r in res.factors)


def _random_direction(rng, n):
    return tuple(rng.randint(-30, 30) or 1 for _ in range(n))


@pytest.mark.parametrize("name", ["ex1", "ex2"])
def test_conjugation_closure(name, ex2):
    f = example1("3/100") if name == "ex1" else ex2
    rng = random.Random(11)
    for _ in range(3):
        r = fiber(f, _random_direction(rng, f.nvars))
        zs = [p.as_complex() for p in r]
        for z in zs:
            assert min(np.max(np.abs(np.conj(z) - w)) for w in zs) < 1e-8
