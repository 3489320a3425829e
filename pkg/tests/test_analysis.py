import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lienard_melnikov.algebra import UniPoly
from lienard_melnikov.analysis import (
    InfeasibleSplit,
    ZeroPolynomial,
    bound_for,
    cauchy_bound,
    construct_sharp,
    construct_sharp_detailed,
    positive_roots,
    roots_match,
    squarefree_decomposition,
    sturm_chain,
    count_roots,
    verify_bound,
)
from lienard_melnikov.forms import SystemSpec
from lienard_melnikov.melnikov import first_nonvanishing
from lienard_melnikov import fixtures
from strategies import rand_spec_case_a, rand_spec_case_b


def c_poly(*coeffs):
    return UniPoly(coeffs, "c")


def from_roots(roots, lead=1):
    p = c_poly(lead)
    for r in roots:
        p = p * c_poly(-r, 1)
    return p


def test_positive_roots_examples():
    rep = positive_roots(c_poly(3, -4, 1))
    assert rep.labels() == ["1", "3"] and rep.all_simple
    rep = positive_roots(c_poly(4, -4, 1))
    assert rep.labels() == ["2"] and rep.roots[0].multiplicity == 2
    assert rep.count_with_multiplicity == 2
    assert positive_roots(c_poly(1, 0, 1)).count_distinct == 0
    with pytest.raises(ZeroPolynomial):
        positive_roots(c_poly())


def test_root_at_zero_is_stripped():
    rep = positive_roots(c_poly(0, 0, -2, 1))
    assert rep.labels() == ["2"]


def test_irrational_roots_are_isolated():
    rep = positive_roots(c_poly(-2, 0, 1))
    (r,) = rep.roots
    assert r.exact is None
    assert r.lo**2 < 2 < r.hi**2
    assert r.hi - r.lo <= Fraction(1, 2**64)


def test_squarefree_decomposition():
    p = from_roots([1, 1, 2, 3, 3, 3])
    parts = squarefree_decomposition(p)
    assert sorted((q.degree, m) for q, m in parts) == [(1, 1), (1, 2), (1, 3)]


def test_sturm_counts_distinct_roots():
    p = from_roots([Fraction(1, 3), 2, 5])
    chain = sturm_chain(p)
    assert count_roots(chain, Fraction(0), Fraction(10)) == 3
    assert count_roots(chain, Fraction(1), Fraction(4)) == 1
    assert cauchy_bound(p) > 5


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.fractions(min_value=-6, max_value=6, max_denominator=6), min_size=1, max_size=6),
    st.integers(-9, 9).filter(bool),
)
def test_positive_roots_against_grid_sign_changes(roots, lead):
    p = from_roots(roots, lead)
    rep = positive_roots(p)
    distinct = sorted({r for r in roots if r > 0})
    assert [r.exact for r in rep.roots] == distinct
    assert rep.count_with_multiplicity == sum(1 for r in roots if r > 0)
    # odd-multiplicity roots show up as sign changes on a fine grid
    grid = [Fraction(k, 97) for k in range(1, 97 * 7)]
    changes = sum(1 for a, b in zip(grid, grid[1:]) if p(a) * p(b) < 0 or p(b) == 0)
    odd = sum(1 for r in distinct if roots.count(r) % 2)
    assert changes >= odd
    assert positive_roots(p * 7).labels() == rep.labels()


def test_bound_examples():
    spec_a = SystemSpec.from_coeffs(F=[[0, 1, 0, 0, 0, 1]], g=[[0, 1]])
    assert bound_for(spec_a).case == "a" and bound_for(spec_a).bound == 2
    spec_b = SystemSpec.from_coeffs(F=[[0, 0, 0, 0, 1]], g=[[0, 0, 0, 0, 1, 1]])
    assert (bound_for(spec_b).case, bound_for(spec_b).bound) == ("b-even-m", 3)
    spec_b_odd = SystemSpec.from_coeffs(F=[[0, 0, 0, 1]], g=[[0, 0, 0, 0, 0, 0, 1, 1]])
    assert (bound_for(spec_b_odd).case, bound_for(spec_b_odd).bound) == ("b-odd-m", 1)
    neither = SystemSpec.from_coeffs(F=[[0, 1], [0, 1]], g=[[1]])
    assert bound_for(neither).case == "inapplicable" and bound_for(neither).bound is None
    with pytest.raises(ValueError):
        verify_bound(neither)


def test_verify_examples():
    v = verify_bound(fixtures.QUADRATIC.spec)
    assert (v.case, v.bound, v.observed_count, v.holds) == ("b-even-m", 1, 1, True)
    v = verify_bound(fixtures.LINEAR.spec)
    assert (v.k, v.observed_count, v.bound) == (1, 0, 0)
    v = verify_bound(SystemSpec.from_coeffs(F=[[0, 0, 1]], g=[[0, 1]]), k_max=3)
    assert v.status == "vacuous" and v.holds is None


@pytest.mark.parametrize("gen, seed", [(rand_spec_case_a, 41), (rand_spec_case_b, 43)])
def test_bound_never_violated(gen, seed):
    rng = random.Random(seed)
    for _ in range(100):
        v = verify_bound(gen(rng))
        assert v.holds in (True, None)


def test_construct_sharp_case_a_example():
    spec = construct_sharp("a", 5, None, [1, 2])
    assert spec.F[0] == UniPoly([0, 1, 0, -1, 0, Fraction(1, 5)])
    assert construct_sharp("a", 1, None, []).F[0] == UniPoly([0, 1])


@pytest.mark.parametrize("m, n, targets", [(4, 4, [1, 2, 3]), (4, 6, [1, 2, 3, 4]), (2, 2, [1]), (4, 2, [1, 3])])
def test_construct_sharp_case_b_tolerance(m, n, targets):
    built = construct_sharp_detailed("b", m, n, targets)
    r = first_nonvanishing(built.spec)
    assert roots_match(r.L.P, built.targets, Fraction(1, 10**25))
    v = verify_bound(built.spec)
    assert v.observed_count == v.bound == len(targets)


def test_construct_sharp_case_b_exact_when_factorable():
    built = construct_sharp_detailed("b", 4, 4, ["3/2", 3, "7/2"])
    assert built.exact
    assert roots_match(first_nonvanishing(built.spec).L.P, built.targets)


def test_construct_sharp_odd_m_in_case_b():
    spec = construct_sharp("b", 5, 3, [1, 2])
    v = verify_bound(spec)
    assert v.case == "b-odd-m" and v.observed_count == v.bound == 2


def test_construct_sharp_rejects_bad_targets():
    with pytest.raises(ValueError):
        construct_sharp("a", 5, None, [1])
    with pytest.raises(ValueError):
        construct_sharp("a", 5, None, [1, 1])
    with pytest.raises(ValueError):
        construct_sharp("a", 5, None, [-1, 2])
    with pytest.raises(ValueError):
        construct_sharp("z", 5, None, [1, 2])


def test_infeasible_split_is_reported():
    # retries=0 leaves no attempt at all
    with pytest.raises(InfeasibleSplit):
        construct_sharp_detailed("b", 6, 4, [1, 2, 3, 4], retries=0)
