from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from amoebakit.poly import LaurentPoly, ParseError, parse

from conftest import example1


def test_parse_example1():
    f = parse("z1^2*z2 + z1*z2^2 - z1*z2 + 3/100", ["z1", "z2"])
    assert len(f) == 4
    assert f.coeff((1, 1)) == -1
    assert f.coeff((0, 0)) == Fraction(3, 100)


def test_parse_example2_terms(ex2):
    assert len(ex2) == 8
    assert ex2.coeff((1, 1, 1)) == 11


def test_parse_negative_exponent_and_errors():
    p = parse("z1^-1 + 2", ["z1"])
    assert p.coeff((-1,)) == 1
    with pytest.raises(ParseError) as err:
        parse("z1 +* z2", ["z1", "z2"])
    assert err.value.pos >= 3
    with pytest.raises(ParseError):
        parse("w + 1", ["z1"])


def test_euler_derivative():
    f = example1(Fraction(3, 100))
    assert f.euler_derivative(0) == parse("2*z1^2*z2 + z1*z2^2 - z1*z2", ["z1", "z2"])


def test_grlex_printing_round_trip():
    f = example1(Fraction(-9, 10))
    text = f.to_str(("z1", "z2"))
    assert text == "z1^2*z2 + z1*z2^2 - z1*z2 - 9/10"
    assert parse(text, ["z1", "z2"]) == f


def test_substitute_parameter():
    fa = parse("z1^2*z2 + z1*z2^2 - z1*z2 + a", ["z1", "z2", "a"])
    f = fa.substitute(2, Fraction(-9, 10))
    assert f.nvars == 2 and f.coeff((0, 0)) == Fraction(-9, 10)


def test_homogenize_binary_form():
    D = parse("36*l^6 - 108*l^5 - 127*l^4 + 434*l^3 - 127*l^2 - 108*l + 36", ["l"])
    H = D.embed(2, [0]).homogenize(1)
    assert H.is_homogeneous() and H.total_degree() == 6
    assert H.substitute(1, 1) == D


def test_exact_evaluation():
    f = example1(Fraction(3, 100))
    assert f.evaluate((Fraction(3, 10), Fraction(1, 2))) == 0


def test_complex_evaluation_of_irrational_point():
    import math

    f = example1(Fraction(3, 100))
    s = math.sqrt(57)
    z = [7 / 40 + s / 40, 9 / 8 - s / 8]
    v = f.eval_complex(z)
    assert abs(v.value) < 1e-12


exps = st.tuples(st.integers(-2, 3), st.integers(-2, 3))
coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
polys = st.dictionaries(exps, coeffs, max_size=5).map(lambda d: LaurentPoly(d, 2))


@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p - p == LaurentPoly.zero(2)
    assert p * q == q * p


@given(polys, polys, st.integers(0, 1))
def test_leibniz(p, q, i):
    assert (p * q).derivative(i) == p.derivative(i) * q + p * q.derivative(i)


@given(polys)
def test_print_parse_round_trip(p):
    assert parse(p.to_str(("z1", "z2")), ["z1", "z2"]) == p
