from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from amoebakit.elim import (
    divexact,
    discriminant,
    gcd,
    resultant,
    squarefree_decomposition,
    univariate_roots,
)
from amoebakit.poly import LaurentPoly, parse

X = ["z", "u", "v"]


def test_resultant_sign_convention():
    p = parse("z - u", X)
    q = parse("z - v", X)
    assert resultant(p, q, 0) == parse("u - v", X)


def test_resultant_of_coprime_constants():
    p = parse("2*z^2 + 1", ["z"])
    q = LaurentPoly.constant(3, 1)
    assert resultant(p, q, 0) == LaurentPoly.constant(9, 1)


def test_discriminant_quadratic():
    # Res(p, p') for a z^2 + b z + c is -a (b^2 - 4ac)
    p = parse("a*z^2 + b*z + c", ["z", "a", "b", "c"])
    expected = parse("-a*(b^2 - 4*a*c)", ["z", "a", "b", "c"])
    assert discriminant(p, 0) == expected


def test_gcd_and_divexact():
    a = parse("(z1 - z2)*(z1 + 2*z2)^2", ["z1", "z2"])
    b = parse("(z1 + 2*z2)*(z1 - 3)", ["z1", "z2"])
    g = gcd(a, b)
    assert g == parse("z1 + 2*z2", ["z1", "z2"]) or g == parse("-z1 - 2*z2", ["z1", "z2"])
    assert divexact(a, g) * g == a


def test_squarefree_example():
    p = parse("z1^4*(z2 - 1)^2*(z1 + z2)", ["z1", "z2"])
    dec = {m: f for f, m in squarefree_decomposition(p)}
    assert dec[4] == parse("z1", ["z1", "z2"])
    assert dec[2] == parse("z2 - 1", ["z1", "z2"])
    assert dec[1] == parse("z1 + z2", ["z1", "z2"])


def test_univariate_roots_rational_and_numeric():
    p = parse("(2*z - 3)^2*(z^2 - 2)", ["z"])
    rs = univariate_roots(p)
    assert rs.rational == [(Fraction(3, 2), 2)]
    vals = sorted(z.real for z, _ in rs.numeric)
    assert vals == pytest.approx([-2 ** 0.5, 2 ** 0.5], abs=1e-12)


small = st.integers(-4, 4)
upolys = st.lists(small, min_size=2, max_size=4).filter(lambda c: c[-1] != 0).map(
    lambda c: LaurentPoly({(k, 0): v for k, v in enumerate(c) if v}, 2))
bipolys = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), small.filter(bool), min_size=1,
                          max_size=4).map(lambda d: LaurentPoly(d, 2))


@given(upolys, upolys, upolys)
def test_resultant_multiplicative(f, g, h):
    assert resultant(f * g, h, 0) == resultant(f, h, 0) * resultant(g, h, 0)


@given(bipolys.filter(lambda p: p.degree(0) > 0), bipolys.filter(lambda p: p.degree(0) > 0))
def test_resultant_antisymmetry(f, g):
    m, n = f.degree(0), g.degree(0)
    r1, r2 = resultant(f, g, 0), resultant(g, f, 0)
    assert r1 == r2 * (-1) ** (m * n)


@given(st.lists(bipolys, min_size=1, max_size=3), st.lists(st.integers(1, 3), min_size=3, max_size=3))
def test_squarefree_reconstruction(factors, mults):
    p = LaurentPoly.one(2)
    for f, m in zip(factors, mults):
        p = p * f ** m
    dec = squarefree_decomposition(p)
    q = LaurentPoly.one(2)
    for f, m in dec:
        q = q * f ** m
    # equal up to a rational unit
    assert p.primitive() in (q.primitive(), -q.primitive())
