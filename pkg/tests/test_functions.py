import cmath
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from sincos_eq.functions import (
    AdditiveFunction,
    Arbitrary,
    ExpPolyFunction,
    Exponential,
    TableFunction,
    Term,
    TwoGPeriodic,
    UnrealizedFunctionError,
    check_exponential,
    enumerate_exponentials,
    even_part,
    function_from_json,
    is_even_exponential,
    max_abs_difference,
    odd_part,
)
from sincos_eq.groups import GroupSpec, UnsupportedDomainError, enumerate_elements, neg, window

from conftest import finite_groups, random_periodic


def all_pairs(g):
    els = enumerate_elements(g)
    return list(itertools.product(els, els))


def test_eval_examples(Z, Z4):
    assert ExpPolyFunction.monomial(Exponential.trivial(Z4))((3,)) == 1
    a = AdditiveFunction(Z, (1,))
    f = ExpPolyFunction.monomial(Exponential.trivial(Z), 0, a)
    assert f((5,)) == 5
    m = Exponential(Z4, (1,))
    assert m((1,)) == 1j
    # i^3 by repeated multiplication
    assert abs(ExpPolyFunction.monomial(m)((3,)) - 1j * 1j * 1j) < 1e-15


def test_enumerate_small_groups():
    Z2 = GroupSpec.cyclic(2)
    vals = sorted(tuple(m(x).real for x in enumerate_elements(Z2)) for m in enumerate_exponentials(Z2))
    assert vals == [(1.0, -1.0), (1.0, 1.0)]
    Z3 = GroupSpec.cyclic(3)
    gens = {complex(round(m((1,)).real, 12), round(m((1,)).imag, 12)) for m in enumerate_exponentials(Z3)}
    cube_roots = {complex(round(z.real, 12), round(z.imag, 12)) for z in (cmath.exp(2j * cmath.pi * k / 3) for k in range(3))}
    assert gens == cube_roots
    triv = GroupSpec(0, ())
    chars = enumerate_exponentials(triv)
    assert len(chars) == 1 and chars[0](()) == 1
    with pytest.raises(UnsupportedDomainError):
        enumerate_exponentials(GroupSpec.integers())


def test_characters_are_distinct_and_complete():
    G = GroupSpec(0, (2, 4))
    chars = enumerate_exponentials(G)
    rows = {tuple(complex(round(m(x).real, 9), round(m(x).imag, 9)) for x in enumerate_elements(G)) for m in chars}
    assert len(rows) == len(chars) == 8


def test_check_exponential_examples(Z4):
    m = Exponential(Z4, (1,))
    ok, dev = check_exponential(m, all_pairs(Z4))
    assert ok and dev <= 1e-12
    bad = TableFunction.from_values(Z4, [1, 2, 4, 8])
    ok, dev = check_exponential(bad, all_pairs(Z4))
    assert not ok and dev > 1
    ok, dev = check_exponential(Exponential.trivial(Z4), all_pairs(Z4))
    assert ok and dev == 0


def test_free_exponential(Z):
    m = Exponential(Z, (), (2.0,))
    assert m((3,)) == 8 and m((-1,)) == 0.5
    ok, _ = check_exponential(m, [((x,), (y,)) for x in range(-4, 5) for y in range(-4, 5)])
    assert ok
    with pytest.raises(ValueError):
        Exponential(Z, (), (0,))


def test_is_even_examples(Z4, Z):
    assert not is_even_exponential(Exponential(Z4, (1,)))
    assert is_even_exponential(Exponential(Z4, (2,)))
    assert is_even_exponential(Exponential.trivial(Z4))
    assert is_even_exponential(Exponential(Z, (), (-1,)))
    assert not is_even_exponential(Exponential(Z, (), (2,)))


@given(finite_groups)
def test_structural_evenness_matches_values(G):
    for m in enumerate_exponentials(G):
        sampled = all(abs(m(x) - m(neg(G, x))) < 1e-12 for x in enumerate_elements(G))
        assert is_even_exponential(m) == sampled


def test_even_odd_parts_examples(Z4):
    c = ExpPolyFunction.monomial(Exponential.trivial(Z4), 3.5)
    els = enumerate_elements(Z4)
    assert max_abs_difference(even_part(c), c, els) == 0
    assert max_abs_difference(odd_part(c), ExpPolyFunction.zero(Z4), els) == 0
    ind = TableFunction.from_values(Z4, [0, 1, 0, 0])
    fe, fo = even_part(ind), odd_part(ind)
    assert [fe(x) for x in els] == [0, 0.5, 0, 0.5]
    assert [fo(x) for x in els] == [0, 0.5, 0, -0.5]


@settings(max_examples=40)
@given(finite_groups, st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False), min_size=24, max_size=24))
def test_even_odd_decomposition(G, vals):
    els = enumerate_elements(G)
    f = TableFunction.from_values(G, vals[: len(els)])
    fe, fo = even_part(f), odd_part(f)
    for x in els:
        assert abs(fe(x) + fo(x) - f(x)) < 1e-12
        assert abs(fe(neg(G, x)) - fe(x)) < 1e-12
        assert abs(fo(neg(G, x)) + fo(x)) < 1e-12


def test_even_odd_parts_of_exppoly(Z):
    m = Exponential(Z, (), (1.5,))
    f = ExpPolyFunction.monomial(m, 2, AdditiveFunction(Z, (1j,)))
    fe, fo = even_part(f), odd_part(f)
    assert isinstance(fe, ExpPolyFunction)
    for x in window(Z, 6):
        assert abs(fe(x) + fo(x) - f(x)) < 1e-9
        assert abs(fe(neg(Z, x)) - fe(x)) < 1e-9


def test_exponentials_never_vanish(Z):
    for G in (GroupSpec.cyclic(7), GroupSpec(0, (2, 4, 3))):
        for m in enumerate_exponentials(G):
            assert min(abs(m(x)) for x in enumerate_elements(G)) >= 1e-12
    m = Exponential(Z, (), (0.5 + 0.5j,))
    assert min(abs(m(x)) for x in window(Z, 10)) >= 1e-12


def test_additive_on_finite_group_is_zero():
    G = GroupSpec(0, (3, 4))
    a = AdditiveFunction.zero(G)
    assert all(a(x) == 0 for x in enumerate_elements(G))
    G1 = GroupSpec(1, (4,))
    a = AdditiveFunction(G1, (2 - 1j,))
    assert a((3, 1)) == a((3, 3)) == 3 * (2 - 1j)
    assert a((2, 0)) + a((5, 1)) == a((7, 1))


def test_periodic_is_even_and_coset_constant(rng):
    G = GroupSpec(1, (4, 3))
    T = random_periodic(rng, G)
    for x in window(G, 3):
        assert T(x) == T(neg(G, x))
        assert T(x) == T((x[0] + 2, x[1] + 2, x[2] + 1))


def test_uniqueness_of_representation(Z):
    # same exponentials, different (a, b) pairs: must differ on a window of 2*#terms+1
    m1, m2 = Exponential(Z, (), (2,)), Exponential(Z, (), (-0.5,))
    f = ExpPolyFunction(Z, (Term(m1, AdditiveFunction(Z, (1,)), 1), Term(m2, AdditiveFunction.zero(Z), 2)))
    g = ExpPolyFunction(Z, (Term(m1, AdditiveFunction(Z, (1,)), 1), Term(m2, AdditiveFunction(Z, (1e-3,)), 2)))
    assert max_abs_difference(f, g, window(Z, 2)) > 1e-6


def test_terms_merge_and_zero_terms_drop(Z4):
    m = Exponential(Z4, (1,))
    f = ExpPolyFunction.monomial(m, 2) + ExpPolyFunction.monomial(m, -2)
    assert f.is_zero()
    g = ExpPolyFunction.monomial(m, 1) + ExpPolyFunction.monomial(m, 1)
    assert len(g.terms) == 1 and g.terms[0].constant == 2


def test_reflect_matches_pointwise(Z):
    m = Exponential(Z, (), (3,))
    f = ExpPolyFunction.monomial(m, 1 + 1j, AdditiveFunction(Z, (2,)))
    r = f.reflect()
    for x in window(Z, 4):
        assert abs(r(x) - f(neg(Z, x))) < 1e-9 * max(1, abs(r(x)))


def test_arbitrary_slot_raises(Z4):
    with pytest.raises(UnrealizedFunctionError):
        Arbitrary(Z4)((1,))


def test_json_roundtrip(Z):
    G = GroupSpec(1, (4,))
    m = Exponential(G, (3,), (1 - 2j,))
    T = TwoGPeriodic.from_values(G, [1, 2j, 3, -1])
    f = ExpPolyFunction(G, (Term(m, AdditiveFunction(G, (0.5,)), 2),), T)
    back = function_from_json(G, f.to_json())
    assert max_abs_difference(f, back, window(G, 3)) < 1e-12
    assert Exponential.from_json(G, m.to_json()) == m
