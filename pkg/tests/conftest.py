import random

import pytest
from hypothesis import settings, strategies as st

from sincos_eq.functions import AdditiveFunction, Exponential, TwoGPeriodic, enumerate_exponentials
from sincos_eq.groups import GroupSpec, all_cosets_2g
from sincos_eq.measures import Measure

def _order(torsion):
    out = 1
    for n in torsion:
        out *= n
    return out


settings.register_profile("default", deadline=None)
settings.load_profile("default")

finite_groups = (
    st.lists(st.integers(1, 8), min_size=1, max_size=3)
    .filter(lambda t: _order(t) <= 24)
    .map(lambda t: GroupSpec(0, tuple(t)))
)
mixed_groups = st.builds(
    GroupSpec,
    st.integers(0, 2),
    st.lists(st.integers(1, 6), max_size=2).map(tuple),
)
small_complex = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


@st.composite
def elements(draw, group, bound=20):
    free = [draw(st.integers(-bound, bound)) for _ in range(group.free_rank)]
    tors = [draw(st.integers(-3 * n, 3 * n)) for n in group.torsion]
    return group.element(free + tors)


def random_complex(rng, scale=2.0):
    return complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale))


def random_measure(rng, group, n_atoms, box=3):
    atoms = []
    for _ in range(n_atoms):
        point = [rng.randint(-box, box) for _ in range(group.free_rank)] + [rng.randrange(n) for n in group.torsion]
        atoms.append((point, random_complex(rng)))
    return Measure.from_atoms(group, atoms)


def random_periodic(rng, group, nonconstant=True):
    vals = [random_complex(rng) for _ in all_cosets_2g(group)]
    if nonconstant and len(vals) > 1:
        vals[1] = vals[0] + 1.0
    return TwoGPeriodic.from_values(group, vals)


def random_character(rng, group):
    return rng.choice(enumerate_exponentials(group))


def random_noneven_character(rng, group):
    return rng.choice([m for m in enumerate_exponentials(group) if not m.is_even])


@pytest.fixture
def rng():
    return random.Random(20261017)


@pytest.fixture
def Z():
    return GroupSpec.integers()


@pytest.fixture
def Z4():
    return GroupSpec.cyclic(4)


@pytest.fixture
def Z6():
    return GroupSpec.cyclic(6)


# -- random solution-family parameters ---------------------------------------

from sincos_eq.families import SolutionParams  # noqa: E402
from sincos_eq.functions import ExpPolyFunction, TableFunction, even_part, odd_part  # noqa: E402
from sincos_eq.groups import enumerate_elements  # noqa: E402


def random_noneven(rng, group):
    if group.is_finite:
        return random_noneven_character(rng, group)
    import cmath

    while True:
        lam = rng.uniform(0.8, 1.25) * cmath.exp(1j * rng.uniform(0, 6.28))
        roots = tuple(rng.randrange(n) for n in group.torsion)
        m = Exponential(group, roots, (lam,) * group.free_rank)
        if not m.is_even:
            return m


def random_even(rng, group):
    roots = tuple(rng.choice([k for k in range(n) if (2 * k) % n == 0]) for n in group.torsion)
    return Exponential(group, roots, tuple(rng.choice([1, -1]) for _ in range(group.free_rank)))


def random_additive(rng, group):
    return AdditiveFunction(group, tuple(random_complex(rng) for _ in range(group.free_rank)))


def random_filler(rng, group, parity="any"):
    """A concrete stand-in for an arbitrary function with the requested parity."""
    if group.is_finite:
        f = TableFunction.from_values(group, [random_complex(rng) for _ in enumerate_elements(group)])
    else:
        m = random_noneven(rng, group)
        f = ExpPolyFunction.monomial(m, random_complex(rng)) + ExpPolyFunction.monomial(
            random_even(rng, group), random_complex(rng)
        )
    if parity == "even":
        return even_part(f)
    if parity == "odd":
        return odd_part(f)
    return f


def nonzero_complex(rng):
    z = random_complex(rng)
    return z if abs(z) > 0.2 else z + 1


def needs_additive(theorem, case):
    return (theorem, case) in {("odd", "ii"), ("combined", "ii"), ("combined", "iii")}


def random_params(rng, theorem, case, group):
    """Valid parameters for one case; None when the case needs a free coordinate the group lacks."""
    if needs_additive(theorem, case) and group.free_rank == 0:
        return None
    T = random_periodic(rng, group)
    kw = dict(
        alpha=nonzero_complex(rng),
        beta=random_complex(rng),
        gamma=nonzero_complex(rng),
        delta=random_complex(rng),
        b=random_complex(rng),
        group=group,
    )
    if case == "i":
        kw["m"] = random_noneven(rng, group)
    if (theorem, case) in {("even", "ii"), ("odd", "ii"), ("combined", "ii"), ("combined", "iii")}:
        kw["m0"] = random_even(rng, group)
        a = random_additive(rng, group)
        kw["a"] = a if group.free_rank else None
    if theorem in ("odd", "combined"):
        kw["T"] = T
    parity_h = {("even", "iv"): "odd", ("odd", "iv"): "even", ("odd", "vi"): "even"}.get((theorem, case), "any")
    kw["h_arbitrary"] = random_filler(rng, group, parity_h)
    kw["g_arbitrary"] = random_filler(rng, group)
    return SolutionParams(**kw)


def pair_instance(rng, even_case, odd_case, group):
    """(even_params, odd_params) sharing one g, or None if the pair cannot be realized on group."""
    from dataclasses import replace

    if odd_case == "ii" and group.free_rank == 0:
        return None
    e = random_params(rng, "even", even_case, group)
    o = random_params(rng, "odd", odd_case, group)
    g_zero_odd = odd_case in ("iii", "v")
    g_zero_even = even_case == "iii"
    if even_case == "i":
        if g_zero_odd:
            e = replace(e, alpha=0, beta=0)
        o = replace(o, m=e.m, alpha=e.alpha, beta=e.beta, g_arbitrary=None)
    elif even_case == "ii":
        if odd_case == "ii":
            e = replace(e, a=None, beta=1 / o.alpha, m0=o.m0)
        elif g_zero_odd:
            e = replace(e, a=None, beta=0)
        o = replace(o, g_arbitrary=None)
    elif even_case == "iv":
        e = replace(e, g_arbitrary=None)
        if g_zero_odd:
            o = replace(o, g_arbitrary=None)
    if g_zero_even:
        if odd_case == "i":
            o = replace(o, alpha=0, beta=0)
        o = replace(o, g_arbitrary=None)
    return e, o


# -- acceptance summary ---------------------------------------------------------

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = (bool(ok), detail)
    print(f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n:>2}: {detail}")
