from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from amoebakit.poly import parse
from amoebakit.singularity import (
    check_multiplicity_budget,
    classify_phase_point,
    dehomogenize,
    jacobian_hessian_identity_check,
    jet_milnor_number,
    milnor_number,
    phase_critical_points,
    rational_singular_points,
)

from conftest import example1

V = ["x", "y"]


@pytest.mark.parametrize("curve,mu,label", [
    ("x*y", 1, "A1"),
    ("y^2 - x^3", 2, "A2"),
    ("y^2 - x^4", 3, "A3"),
    ("x^3 - x*y^2", 4, "D4"),
    # order 3 with mu > 4 needs the tangent cone, which the label does not inspect
    ("y^3 - x^4", 6, "unclassified(6, 3)"),
])
def test_milnor_numbers_of_simple_germs(curve, mu, label):
    rep = milnor_number(parse(curve, V), (0, 0))
    assert rep.milnor_number == mu
    assert rep.oracle == mu
    assert rep.label == label


def test_milnor_number_at_shifted_point():
    d = parse("(y - 2)^2 - (x - 1)^3", V)
    assert milnor_number(d, (1, 2)).milnor_number == 2


def test_point_off_curve_rejected():
    with pytest.raises(ValueError):
        milnor_number(parse("x^2 + y^2 + 1", V), (1, 2))


def test_rational_singular_points():
    assert rational_singular_points(parse("y^2 - x^3", V)) == [(0, 0)]
    d = parse("(y - x)*(y + x - 2)*(2*y - 1)", V)
    assert rational_singular_points(d) == [(Fraction(1, 2), Fraction(1, 2)), (1, 1), (Fraction(3, 2), Fraction(1, 2))]


def test_dehomogenize_drops_last_variable():
    d = parse("y1^2*y3 - y2^3", ["y1", "y2", "y3"])
    assert dehomogenize(d) == parse("x^2 - y^3", V)


def test_classification_table():
    assert classify_phase_point(1, 0, 2) == ("A1", True)
    assert classify_phase_point(2, 1, 2) == ("A2", True)
    assert classify_phase_point(3, 1, 3) == ("A3", True)
    assert classify_phase_point(4, 2, 3)[0] == "D4"
    with pytest.raises(ValueError):
        classify_phase_point(2, 2, 2)


def test_example1_morse_fiber():
    reps = phase_critical_points(example1("3/100"), (1, 3))
    assert [r.label for r in reps] == ["A1"] * 3
    exact = reps[0]
    assert exact.identity is not None and exact.identity.holds


def test_example1_fold_point():
    # at a = -9/100 the direction (3:1) is a ramification direction
    f = example1("-9/100")
    reps = phase_critical_points(f, (3, 1))
    labels = sorted(r.label for r in reps)
    assert labels == ["A1", "A2"]
    budget = check_multiplicity_budget(f, (3, 1))
    assert budget.m == 1 and budget.slack == 0


def test_identity_at_exact_point():
    f = example1("3/100")
    rep = jacobian_hessian_identity_check(f, (1, 3), (Fraction(3, 10), Fraction(1, 2)))
    assert rep.holds and rep.det_relation_holds


coef = st.integers(-3, 3)


@given(coef.filter(bool), coef.filter(bool), st.integers(2, 5))
def test_jet_oracle_matches_resultant_for_ak(a, b, k):
    # a y^2 + b x^{k+1} is an A_k germ
    d = parse(f"{a}*y^2 + {b}*x^{k + 1}", V)
    rep = milnor_number(d, (0, 0))
    assert rep.milnor_number == k == jet_milnor_number(d, (0, 0))
