from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lightlike_zmc.exact_poly import (
    CYPoly,
    YPoly,
    add,
    as_rational,
    diff_y,
    double_integrate_zero_ic,
    mul,
    specialize_c,
)


def m(coeff, j, i):
    return CYPoly.monomial(coeff, j, i)


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
polys = st.dictionaries(
    st.tuples(st.integers(0, 4), st.integers(0, 6)), rationals, max_size=5
).map(CYPoly)


class TestExamples:
    def test_add(self):
        assert add(m(3, 1, 1), m(-3, 1, 1)) == CYPoly.zero()
        assert add(m(3, 1, 1), m(-3, 1, 1)).terms == {}
        assert add(m(3, 1, 1), CYPoly.zero()) == m(3, 1, 1)
        assert add(m(3, 1, 1), m(-4, 2, 3)).terms == {(1, 1): 3, (2, 3): -4}

    def test_mul(self):
        assert mul(m(3, 1, 1), m(3, 1, 1)) == m(9, 2, 2)
        assert mul(m(3, 1, 1), CYPoly.one()) == m(3, 1, 1)
        assert mul(m(3, 1, 1), m(-12, 2, 2)) == m(-36, 3, 3)

    def test_diff_y(self):
        assert diff_y(m(3, 1, 1)) == m(3, 1, 0)
        assert diff_y(m(-4, 2, 3)) == m(-12, 2, 2)
        assert diff_y(m(7, 3, 0)).is_zero()

    def test_double_integrate(self):
        assert double_integrate_zero_ic(m(-24, 2, 1)) == m(-4, 2, 3)
        assert double_integrate_zero_ic(CYPoly.zero()).is_zero()
        assert double_integrate_zero_ic(m(180, 3, 3)) == m(9, 3, 5)

    def test_specialize(self):
        half = Fraction(1, 2)
        assert specialize_c(m(3, 1, 1), half) == YPoly([0, Fraction(3, 2)])
        assert specialize_c(m(-4, 2, 3), half) == YPoly([0, 0, 0, -1])
        b7 = m(70, 5, 9) + m(-14, 3, 3)
        expect = [0] * 10
        expect[9], expect[3] = 70, -14
        assert specialize_c(b7, 1) == YPoly(expect)


def test_zero_coefficients_never_stored():
    p = CYPoly({(1, 1): 0, (2, 2): Fraction(1, 3)})
    assert p.terms == {(2, 2): Fraction(1, 3)}
    assert (p - p).terms == {}


def test_degrees():
    p = m(1, 2, 5) + m(3, 4, 1)
    assert p.degree_y() == 5
    assert p.degree_c() == 4
    assert CYPoly.zero().degree_y() == -1


def test_negative_exponent_rejected():
    with pytest.raises(ValueError):
        CYPoly({(0, -1): 1})


def test_as_rational_parses_strings_exactly():
    assert as_rational("1/2") == Fraction(1, 2)
    assert as_rational("0.1") == Fraction(1, 10)
    assert as_rational(0.5) == Fraction(1, 2)


def test_str_is_readable():
    assert str(m(70, 5, 9) + m(-14, 3, 3)) == "70*c^5*y^9 - 14*c^3*y^3"
    assert str(CYPoly.zero()) == "0"


def test_ypoly_eval_and_diff():
    p = YPoly([1, 2, 3])
    assert p(Fraction(1, 2)) == Fraction(11, 4)
    assert p.diff() == YPoly([2, 6])
    assert (p * p)(2) == p(2) ** 2


@given(polys)
def test_roundtrip_double_integral(p):
    r = p.double_integrate_zero_ic()
    assert r.diff_y().diff_y() == p
    assert all(i >= 2 for (_, i) in r.terms)


@given(polys, polys, polys)
@settings(max_examples=60)
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p + q == q + p
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r


@given(polys)
def test_additive_inverse_is_canonical_zero(p):
    assert (p + (-p)).terms == {}


@given(polys, polys, rationals)
def test_specialize_is_a_ring_map(p, q, c):
    assert (p * q).specialize_c(c) == p.specialize_c(c) * q.specialize_c(c)
    assert (p + q).specialize_c(c) == p.specialize_c(c) + q.specialize_c(c)


@given(polys, rationals, rationals)
def test_call_matches_specialize(p, c, y):
    assert p(c, y) == p.specialize_c(c)(y)
