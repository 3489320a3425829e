import random
import time

import pytest

from lienard_melnikov.algebra import UniPoly, parity_split
from lienard_melnikov.analysis import degree_sanity_bound, positive_roots
from lienard_melnikov.forms import SystemSpec, build_forms, in_class_A
from lienard_melnikov.melnikov import (
    Exhausted,
    even_part_oracle,
    first_nonvanishing,
    odd_part_oracle,
)
from lienard_melnikov.reduction import cycle_integral, verify_cochain
from lienard_melnikov import fixtures
from strategies import rand_F, rand_spec_case_a, rand_unipoly


def test_quadratic_fixture():
    t = time.perf_counter()
    r = first_nonvanishing(fixtures.QUADRATIC.spec)
    assert time.perf_counter() - t < 1
    assert r.k == 2 and r.terminated == "found"
    assert r.L.P == UniPoly([-4, 2], "c")
    roots = positive_roots(r.L.P)
    assert roots.labels() == ["2"] and roots.all_simple


def test_cubic_fixture_as_given_stops_at_second_order():
    r = first_nonvanishing(fixtures.CUBIC.spec)
    assert r.k == 2
    assert r.L.P == UniPoly([0, -12], "c")


def test_cubic_corrected_fixture():
    r = first_nonvanishing(fixtures.CUBIC_CORRECTED.spec)
    assert r.k == 3
    assert r.L.P == UniPoly([-20, 30, -10], "c")
    assert positive_roots(r.L.P).labels() == ["1", "2"]


def test_linear_fixture():
    r = first_nonvanishing(fixtures.LINEAR.spec)
    assert (r.k, r.L.P) == (1, UniPoly([2], "c"))
    assert positive_roots(r.L.P).count_distinct == 0


def test_trace_witnesses_verify():
    for fx in fixtures.ALL:
        r = first_nonvanishing(fx.spec)
        assert len(r.trace) == r.k - 1
        for Omega, witness in r.trace:
            assert verify_cochain(Omega, witness)


def test_exhausted_is_raised_with_partial_result():
    # F even and g odd: every omega is in class A
    spec = SystemSpec.from_coeffs(F=[[0, 0, 1]], g=[[0, 1]])
    with pytest.raises(Exhausted) as err:
        first_nonvanishing(spec, k_max=5)
    assert err.value.result.terminated == "exhausted"
    assert len(err.value.result.trace) == 5
    with pytest.raises(Exhausted, match="class A"):
        first_nonvanishing(spec, k_max=5, fast_path=True)
    with pytest.raises(ValueError):
        first_nonvanishing(spec, k_max=0)


def test_even_part_oracle_examples():
    assert even_part_oracle(UniPoly([1]), UniPoly([3, 1])).P == UniPoly([2], "c")
    assert even_part_oracle(UniPoly([0, 1])).P.is_zero()
    assert even_part_oracle(UniPoly([0, 0, 1])).P == UniPoly([0, 1], "c")


def test_odd_part_oracle_examples():
    val = odd_part_oracle(UniPoly([-2], "u"), UniPoly([1, -1], "u"))
    assert val.cycle.P == UniPoly([-4, 2], "c")
    assert val.sign_source == "closed-form"
    assert odd_part_oracle(UniPoly([], "u"), UniPoly([1], "u")).cycle.is_zero()
    assert odd_part_oracle(UniPoly([1], "u"), UniPoly([], "u")).cycle.is_zero()
    with pytest.raises(TypeError):
        odd_part_oracle(UniPoly([1]), UniPoly([1], "u"))


def test_first_order_matches_even_part_oracle():
    rng = random.Random(21)
    for _ in range(100):
        F = rand_F(rng, rng.randint(1, 9))
        g = rand_unipoly(rng, rng.randint(0, 9))
        spec = SystemSpec((F,), (g,))
        L1 = cycle_integral(build_forms(spec)[0])
        assert L1.P == even_part_oracle(spec.f(1), g).P
        try:
            r = first_nonvanishing(spec)
        except Exhausted:
            continue
        if r.k == 1:
            assert r.L.P == L1.P


def test_second_order_matches_odd_part_oracle():
    rng = random.Random(23)
    checked = 0
    for _ in range(100):
        F = rand_F(rng, 2 * rng.randint(1, 4), parity=0)
        g = rand_unipoly(rng, rng.randint(0, 9))
        spec = SystemSpec((F,), (g,))
        assert cycle_integral(build_forms(spec)[0]).is_zero()
        _, ftilde = parity_split(spec.f(1))
        ghat, _ = parity_split(g)
        oracle = odd_part_oracle(ftilde, ghat).cycle.P
        try:
            r = first_nonvanishing(spec)
        except Exhausted:
            assert oracle.is_zero()
            continue
        if r.k == 2:
            checked += 1
            assert positive_roots(r.L.P).labels() == positive_roots(oracle).labels()
            assert r.L.P == oracle
    assert checked > 50


def test_fast_path_agrees_on_odd_g():
    rng = random.Random(29)
    for _ in range(60):
        spec = rand_spec_case_a(rng)
        try:
            general = first_nonvanishing(spec)
        except Exhausted:
            with pytest.raises(Exhausted):
                first_nonvanishing(spec, fast_path=True)
            continue
        fast = first_nonvanishing(spec, fast_path=True)
        assert (fast.k, fast.L.P) == (general.k, general.L.P)
        for Omega, _ in general.trace:
            assert in_class_A(Omega)
        assert general.L.P == cycle_integral(build_forms(spec)[general.k - 1]).P


def test_degree_sanity_on_random_specs():
    rng = random.Random(31)
    for _ in range(60):
        spec = rand_spec_case_a(rng)
        try:
            r = first_nonvanishing(spec)
        except Exhausted:
            continue
        roots = positive_roots(r.L.P)
        assert roots.count_with_multiplicity <= degree_sanity_bound(r.k, spec.m, spec.n)
