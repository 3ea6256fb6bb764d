import pytest

from sincos_eq.families import (
    COMBINED_CASES,
    EVEN_CASES,
    ODD_CASES,
    ParameterError,
    SolutionParams,
    Theorem,
    build,
    build_combined_case,
    build_even_case,
    build_odd_case,
    compose_FH,
    is_two_divisible,
    split_FH,
)
from sincos_eq.functions import (
    AdditiveFunction,
    Arbitrary,
    ExpPolyFunction,
    Exponential,
    TableFunction,
    TwoGPeriodic,
    UnrealizedFunctionError,
    max_abs_difference,
)
from sincos_eq.groups import GroupSpec, all_cosets_2g, enumerate_elements, window
from sincos_eq.verify import Domain, residual_dalem1, residual_even, residual_odd

from conftest import needs_additive, random_params

GROUPS = [GroupSpec.cyclic(6), GroupSpec.cyclic(4), GroupSpec.integers(), GroupSpec(1, (2,))]
TOL = 1e-9


def _window(G):
    return Domain(G, 6 if G.free_rank == 1 and G.torsion else 10)


@pytest.mark.parametrize("G", GROUPS, ids=str)
@pytest.mark.parametrize("case", EVEN_CASES)
def test_even_forward(G, case, rng):
    for _ in range(3):
        p = random_params(rng, "even", case, G)
        F, g, he = build_even_case(case, p)
        assert residual_even(F, g, he, _window(G)).value <= TOL


def _realizable(theorem, cases):
    # additive-bearing cases need a free coordinate
    return [(G, c) for G in GROUPS for c in cases if G.free_rank or not needs_additive(theorem, c)]


@pytest.mark.parametrize("G,case", _realizable("odd", ODD_CASES), ids=str)
def test_odd_forward(G, case, rng):
    for _ in range(3):
        p = random_params(rng, "odd", case, G)
        H, g, ho = build_odd_case(case, p)
        assert residual_odd(H, g, ho, _window(G)).value <= TOL


@pytest.mark.parametrize("G,case", _realizable("combined", COMBINED_CASES), ids=str)
def test_combined_forward(G, case, rng):
    for _ in range(3):
        p = random_params(rng, "combined", case, G)
        F1, F2, g, h = build_combined_case(case, p)
        assert residual_dalem1(F1, F2, g, h, _window(G)).value <= TOL


def test_combined_i_example_on_Z3():
    Z3 = GroupSpec.cyclic(3)
    m = Exponential(Z3, (1,))
    F1, F2, g, h = build_combined_case("i", SolutionParams(alpha=1, gamma=1, m=m))
    els = enumerate_elements(Z3)
    assert max_abs_difference(F1, m, els) == 0
    assert max_abs_difference(F2, ExpPolyFunction.zero(Z3), els) == 0
    assert max_abs_difference(g, m, els) == 0 and max_abs_difference(h, m, els) == 0
    assert residual_dalem1(F1, F2, g, h, Domain(Z3)).value <= 1e-15


def test_combined_ii_example_on_Z(Z):
    m0 = Exponential.trivial(Z)
    a = AdditiveFunction(Z, (1,))
    F1, F2, g, h = build_combined_case("ii", SolutionParams(alpha=1, m0=m0, a=a))
    for x in window(Z, 10):
        assert F1(x) == 0.5 * x[0] and F2(x) == -0.5 * x[0]
        assert g(x) == 1 and h(x) == x[0]
    assert residual_dalem1(F1, F2, g, h, Domain(Z, 10)).value == 0


def test_combined_iv_parity_indicator_on_Z4(Z4):
    T = TwoGPeriodic.from_values(Z4, [0, 1])
    h = TableFunction.from_values(Z4, [3, -1j, 2, 7])
    F1, F2, g, hh = build_combined_case("iv", SolutionParams(T=T, h_arbitrary=h))
    assert residual_dalem1(F1, F2, g, hh, Domain(Z4)).value == 0
    assert [F1(x) for x in enumerate_elements(Z4)] == [0, 1, 0, 1]


def test_arbitrary_slots_default_to_markers(Z4):
    F, g, h = build_even_case("iii", SolutionParams(group=Z4))
    assert max_abs_difference(F, ExpPolyFunction.zero(Z4), enumerate_elements(Z4)) == 0
    assert isinstance(h, Arbitrary)
    with pytest.raises(UnrealizedFunctionError):
        h((0,))
    H, g, h = build_odd_case("v", SolutionParams(group=Z4))
    assert H.is_zero() and g.is_zero() and isinstance(h, Arbitrary)


def test_split_compose_examples(Z4):
    f = TableFunction.from_values(Z4, [1, 2j, 3, 4])
    els = enumerate_elements(Z4)
    F, H = split_FH(f, f)
    assert max_abs_difference(F, 2 * f, els) == 0 and max(abs(H(x)) for x in els) == 0
    F, H = split_FH(f, -f)
    assert max(abs(F(x)) for x in els) == 0 and max_abs_difference(H, 2 * f, els) == 0
    F1, F2 = compose_FH(*split_FH(f, 2 * f))
    assert max_abs_difference(F1, f, els) < 1e-15 and max_abs_difference(F2, 2 * f, els) < 1e-15


def test_build_dispatch(Z4):
    fam = build(Theorem.COMBINED, "iv", SolutionParams(group=Z4))
    assert set(fam.functions) == {"F1", "F2", "g", "h"}
    assert fam.to_json()["theorem"] == "combined"


@pytest.mark.parametrize("n", [1, 3, 5, 9, 15])
def test_two_divisible_collapse(n):
    G = GroupSpec.cyclic(n)
    assert is_two_divisible(G)
    assert len(all_cosets_2g(G)) == 1
    T = TwoGPeriodic.from_values(G, [2 - 1j])
    assert T.is_constant()
    assert not is_two_divisible(GroupSpec.cyclic(4))


def test_constraint_errors(Z4, Z):
    m = Exponential(Z4, (1,))
    even_m = Exponential(Z4, (2,))
    with pytest.raises(ParameterError):
        build_even_case("i", SolutionParams(m=m, gamma=0))
    with pytest.raises(ParameterError):
        build_even_case("i", SolutionParams(m=even_m, gamma=1))
    with pytest.raises(ParameterError):
        build_even_case("ii", SolutionParams(m0=m, alpha=1))
    with pytest.raises(ParameterError):
        build_even_case("ii", SolutionParams(m0=even_m, alpha=0))
    with pytest.raises(ParameterError):
        build_odd_case("ii", SolutionParams(m0=even_m, alpha=1))
    with pytest.raises(ParameterError):
        build_combined_case("ii", SolutionParams(m0=Exponential.trivial(Z), alpha=0, a=AdditiveFunction(Z, (1,))))
    with pytest.raises(ParameterError):
        build_combined_case("iii", SolutionParams(m0=Exponential.trivial(Z), alpha=1))
    with pytest.raises(ParameterError):
        build_odd_case("iv", SolutionParams(group=Z4, h_arbitrary=TableFunction.from_values(Z4, [0, 1, 0, 0])))
    with pytest.raises(ParameterError):
        build_even_case("vii", SolutionParams(group=Z4))
    with pytest.raises(ParameterError):
        SolutionParams().resolve_group()
