from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from weylscan import exact

rationals = st.fractions(
    min_value=-5, max_value=5, max_denominator=6
)


def test_dot_dimension_mismatch():
    with pytest.raises(ValueError):
        exact.dot((Fraction(1),), (Fraction(1), Fraction(2)))


def test_solve_known():
    a = ((Fraction(2), Fraction(-1)), (Fraction(-1), Fraction(2)))
    x = exact.solve(a, (Fraction(1), Fraction(0)))
    assert x == (Fraction(2, 3), Fraction(1, 3))


@given(st.lists(st.lists(rationals, min_size=3, max_size=3), min_size=3, max_size=3))
def test_inverse_roundtrip(rows):
    a = tuple(tuple(r) for r in rows)
    if exact.determinant(a) == 0:
        return
    assert exact.mat_mul(a, exact.inverse(a)) == exact.identity(3)


def test_determinant_singular():
    a = ((Fraction(1), Fraction(2)), (Fraction(2), Fraction(4)))
    assert exact.determinant(a) == 0
    with pytest.raises(ValueError):
        exact.solve(a, (Fraction(1), Fraction(1)))


def test_fraction_formatting():
    assert exact.format_fraction(Fraction(4, 6)) == "2/3"
    assert exact.parse_fraction("2/3") == Fraction(2, 3)
    assert exact.parse_fraction("1.45") == Fraction(29, 20)
