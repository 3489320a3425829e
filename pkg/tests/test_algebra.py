from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lienard_melnikov.algebra import UniPoly, XHPoly, XYPoly, as_rat, lift_xy, parity_split, substitute_H

rats = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def xh_polys(max_deg=5):
    keys = st.tuples(st.integers(0, max_deg), st.integers(0, max_deg))
    return st.dictionaries(keys, rats, max_size=6).map(XHPoly)


def test_as_rat_rejects_inexact():
    assert as_rat("3/4") == Fraction(3, 4)
    assert as_rat(-2) == Fraction(-2)
    with pytest.raises(TypeError):
        as_rat(0.5)
    with pytest.raises(ValueError):
        as_rat("0.5")
    with pytest.raises(TypeError):
        as_rat(True)


def test_unipoly_normalises_trailing_zeros():
    p = UniPoly([1, 2, 0, 0])
    assert p.degree == 1
    assert UniPoly([]).degree == -1
    assert UniPoly([0, 0]).is_zero()


def test_variable_tags_do_not_mix():
    with pytest.raises(TypeError):
        UniPoly([1], "x") + UniPoly([1], "c")
    with pytest.raises(ValueError):
        UniPoly([1], "z")


def test_rational_normalisation():
    a = Fraction(6, 8)
    s = UniPoly([a]) + UniPoly([-a])
    assert s.is_zero()
    assert (a + -a).denominator == 1


@pytest.mark.parametrize(
    "coeffs, hhat, htilde",
    [([1, 2, 3, 4], [1, 3], [2, 4]), ([0, 1], [], [1]), ([5], [5], [])],
)
def test_parity_split_examples(coeffs, hhat, htilde):
    a, b = parity_split(UniPoly(coeffs))
    assert a == UniPoly(hhat, "u") and b == UniPoly(htilde, "u")
    assert a.var == b.var == "u"


@given(st.lists(rats, max_size=31))
def test_parity_split_reconstructs(coeffs):
    h = UniPoly(coeffs)
    hhat, htilde = parity_split(h)
    assert hhat.compose_square() + UniPoly([0, 1]) * htilde.compose_square() == h


def test_divmod_and_calculus():
    p = UniPoly([-1, 0, 1])
    q, r = p.divmod(UniPoly([-1, 1]))
    assert q == UniPoly([1, 1]) and r.is_zero()
    assert p.derivative() == UniPoly([0, 2])
    assert p.derivative().antiderivative() == UniPoly([0, 0, 1])
    assert p(Fraction(1, 2)) == Fraction(-3, 4)
    with pytest.raises(ZeroDivisionError):
        p.divmod(UniPoly([]))


def test_substitute_H_examples():
    half = Fraction(1, 2)
    assert substitute_H(XHPoly({(0, 1): 1})) == XYPoly({(2, 0): half, (0, 2): half})
    assert substitute_H(XHPoly({(2, 1): 1})) == XYPoly({(4, 0): half, (2, 2): half})
    assert substitute_H(XHPoly({(0, 1): 2, (2, 0): -1})) == XYPoly({(0, 2): 1})


@settings(max_examples=60, deadline=None)
@given(xh_polys(), xh_polys())
def test_substitute_H_is_a_ring_homomorphism(p, q):
    assert substitute_H(p * q) == substitute_H(p) * substitute_H(q)
    assert substitute_H(p + q) == substitute_H(p) + substitute_H(q)


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.tuples(st.integers(0, 6), st.integers(0, 6)), rats, max_size=6).map(XYPoly))
def test_lift_then_substitute_is_identity(p):
    a, b = lift_xy(p)
    assert substitute_H(a) + substitute_H(b).shift(0, 1) == p


def test_bivariate_immutability_and_zero_pruning():
    p = XHPoly({(1, 0): 1, (0, 0): 0})
    assert len(p) == 1
    with pytest.raises(AttributeError):
        p.foo = 1
    assert (p - p).is_zero()


def test_deg2_grading():
    assert XHPoly({(2, 1): 1, (0, 3): 2}).deg2() == 3
    with pytest.raises(ValueError):
        XHPoly({(1, 0): 1}).deg2()
