"""Closed-form solution families of

    F1(x + y) + F2(x - y) = g(x) h(y)

and of its even/odd halves

    F(x + y) + F(x - y) = 2 g(x) h_e(y)      (F = F1 + F2)
    H(x + y) - H(x - y) = 2 g(x) h_o(y)      (H = F1 - F2)

together with the table that pairs an even case with an odd case.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Mapping

from .functions import (
    AdditiveFunction,
    Arbitrary,
    DEFAULT_TOL,
    Exponential,
    ExpPolyFunction,
    GroupFunction,
    TwoGPeriodic,
    canonical_orientation,
    even_part,
    function_to_json,
    odd_part,
)
from .groups import GroupSpec, enumerate_elements, neg
from .jsonio import dump_complex


class Theorem(str, enum.Enum):
    EVEN = "even"
    ODD = "odd"
    COMBINED = "combined"


EVEN_CASES = ("i", "ii", "iii", "iv")
ODD_CASES = ("i", "ii", "iii", "iv", "v", "vi")
COMBINED_CASES = ("i", "ii", "iii", "iv", "v")

CASES = {Theorem.EVEN: EVEN_CASES, Theorem.ODD: ODD_CASES, Theorem.COMBINED: COMBINED_CASES}


class ParameterError(ValueError):
    """Case parameters violate the constraints attached to that case."""


@dataclass(frozen=True)
class SolutionParams:
    alpha: complex = 0
    beta: complex = 0
    gamma: complex = 0
    delta: complex = 0
    b: complex = 0
    m: Exponential | None = None
    m0: Exponential | None = None
    a: AdditiveFunction | None = None
    T: TwoGPeriodic | None = None
    # fillers for "arbitrary function" slots
    g_arbitrary: GroupFunction | None = None
    h_arbitrary: GroupFunction | None = None
    group: GroupSpec | None = None

    def resolve_group(self) -> GroupSpec:
        for obj in (self.group, self.m, self.m0, self.a, self.T, self.g_arbitrary, self.h_arbitrary):
            if isinstance(obj, GroupSpec):
                return obj
            if obj is not None:
                return obj.group
        raise ParameterError("cannot infer the group: give params.group or one of m, m0, a, T")

    def to_json(self) -> dict:
        out: dict = {k: dump_complex(getattr(self, k)) for k in ("alpha", "beta", "gamma", "delta", "b")}
        for k in ("m", "m0", "a", "T", "g_arbitrary", "h_arbitrary"):
            v = getattr(self, k)
            if v is not None:
                out[k] = function_to_json(v)
        return out


@dataclass
class SolutionFamily:
    theorem: Theorem
    case: str
    params: SolutionParams
    functions: dict[str, GroupFunction] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"theorem": self.theorem.value, "case": self.case, "params": self.params.to_json()}


def _close(u: complex, v: complex, tol: float = DEFAULT_TOL) -> bool:
    return abs(complex(u) - complex(v)) <= tol


def _nonzero(z: complex, name: str, case: str, tol: float = DEFAULT_TOL) -> None:
    if abs(z) <= tol:
        raise ParameterError(f"case ({case}) requires {name} != 0")


def _need(value, name: str, case: str):
    if value is None:
        raise ParameterError(f"case ({case}) requires parameter {name}")
    return value


def _need_noneven(m: Exponential | None, case: str) -> Exponential:
    m = _need(m, "m", case)
    if m.is_even:
        raise ParameterError(f"case ({case}) requires m != m_check, but {m!r} is even")
    return m


def _need_even(m0: Exponential | None, case: str) -> Exponential:
    m0 = _need(m0, "m0", case)
    if not m0.is_even:
        raise ParameterError(f"case ({case}) requires an even m0, but {m0!r} is not even")
    return m0


def _need_nonzero_additive(a: AdditiveFunction | None, case: str) -> AdditiveFunction:
    a = _need(a, "a", case)
    if a.is_zero(DEFAULT_TOL):
        raise ParameterError(f"case ({case}) requires a nonzero additive function a")
    return a


def _zero(g: GroupSpec) -> ExpPolyFunction:
    return ExpPolyFunction.zero(g)


def _periodic(p: SolutionParams, g: GroupSpec) -> ExpPolyFunction:
    return p.T.as_exppoly() if p.T is not None else _zero(g)


def _exp(m: Exponential, c: complex = 1, a: AdditiveFunction | None = None) -> ExpPolyFunction:
    return ExpPolyFunction.monomial(m, c, a)


def _linear_pair(m: Exponential, u: complex, v: complex) -> ExpPolyFunction:
    """u m + v m_check."""
    return _exp(m, u) + _exp(m.inverse(), v)


def _times_m0(m0: Exponential, a: AdditiveFunction, ca: complex, b: complex) -> ExpPolyFunction:
    """(ca * a(x) + b) m0(x)."""
    return _exp(m0, b, a.scaled(ca))


def _is_identically(f: GroupFunction, value: float, parity: int = 0, tol: float = DEFAULT_TOL) -> bool:
    """On finite groups: f == value everywhere (parity 0), or f is even (+1) / odd (-1)."""
    g = f.group
    for x in enumerate_elements(g):
        target = value if parity == 0 else parity * f(neg(g, x))
        if abs(f(x) - target) > tol:
            return False
    return True


def _arbitrary_slot(fill: GroupFunction | None, group: GroupSpec, parity: str, name: str, case: str) -> GroupFunction:
    if fill is None:
        return Arbitrary(group, parity)
    if fill.group != group:
        raise ParameterError(f"case ({case}): {name} lives on {fill.group}, expected {group}")
    if parity != "any" and group.is_finite and not isinstance(fill, Arbitrary):
        if not _is_identically(fill, 0, 1 if parity == "even" else -1):
            raise ParameterError(f"case ({case}) requires {name} to be an {parity} function")
    return fill


# -- even and odd halves -------------------------------------------------------


def build_even_case(case: str, params: SolutionParams) -> tuple[GroupFunction, GroupFunction, GroupFunction]:
    """(F, g, h_e) solving F(x+y) + F(x-y) = 2 g(x) h_e(y)."""
    p = params
    grp = p.resolve_group()
    if case == "i":
        m = _need_noneven(p.m, case)
        _nonzero(p.gamma, "gamma", case)
        g = _linear_pair(m, p.alpha, p.beta)
        return g.scale(p.gamma), g, _linear_pair(m, p.gamma / 2, p.gamma / 2)
    if case == "ii":
        m0 = _need_even(p.m0, case)
        _nonzero(p.alpha, "alpha", case)
        a = p.a if p.a is not None else AdditiveFunction.zero(grp)
        F = _times_m0(m0, a, 1, p.alpha * p.beta)
        g = _times_m0(m0, a, 1 / p.alpha, p.beta)
        return F, g, _exp(m0, p.alpha)
    if case == "iii":
        h = _arbitrary_slot(p.h_arbitrary, grp, "any", "h", case)
        return _zero(grp), _zero(grp), even_part(h)
    if case == "iv":
        g = _arbitrary_slot(p.g_arbitrary, grp, "any", "g", case)
        _arbitrary_slot(p.h_arbitrary, grp, "odd", "h", case)
        return _zero(grp), g, _zero(grp)
    raise ParameterError(f"unknown even case {case!r}; expected one of {EVEN_CASES}")


def build_odd_case(case: str, params: SolutionParams) -> tuple[GroupFunction, GroupFunction, GroupFunction]:
    """(H, g, h_o) solving H(x+y) - H(x-y) = 2 g(x) h_o(y)."""
    p = params
    grp = p.resolve_group()
    T = _periodic(p, grp)
    if case == "i":
        m = _need_noneven(p.m, case)
        H = _linear_pair(m, p.alpha * p.gamma, -p.beta * p.gamma) + T
        return H, _linear_pair(m, p.alpha, p.beta), _linear_pair(m, p.gamma / 2, -p.gamma / 2)
    if case == "ii":
        m0 = _need_even(p.m0, case)
        _nonzero(p.alpha, "alpha", case)
        a = _need_nonzero_additive(p.a, case)
        H = _times_m0(m0, a, 1, p.b) + T
        return H, _exp(m0, 1 / p.alpha), _times_m0(m0, a, p.alpha, 0)
    if case in ("iii", "v"):
        h = _arbitrary_slot(p.h_arbitrary, grp, "any", "h", case)
        H = T if case == "iii" else _zero(grp)
        return H, _zero(grp), odd_part(h)
    if case in ("iv", "vi"):
        g = _arbitrary_slot(p.g_arbitrary, grp, "any", "g", case)
        _arbitrary_slot(p.h_arbitrary, grp, "even", "h", case)
        H = T if case == "iv" else _zero(grp)
        return H, g, _zero(grp)
    raise ParameterError(f"unknown odd case {case!r}; expected one of {ODD_CASES}")


# -- full equation ------------------------------------------------------------


def build_combined_case(
    case: str, params: SolutionParams, strict: bool = True
) -> tuple[GroupFunction, GroupFunction, GroupFunction, GroupFunction]:
    """(F1, F2, g, h) solving F1(x+y) + F2(x-y) = g(x) h(y).

    ``strict=False`` admits the degenerate a = 0 members of cases (ii) and
    (iii) that arise when pairing; they still solve the equation.
    """
    p = params
    grp = p.resolve_group()
    T = _periodic(p, grp)
    if case == "i":
        # an even m is allowed here: it only merges the two terms
        m = _need(p.m, "m", case)
        F1 = _linear_pair(m, p.alpha * p.gamma, p.beta * p.delta) + T
        F2 = _linear_pair(m, p.alpha * p.delta, p.beta * p.gamma) - T
        return F1, F2, _linear_pair(m, p.alpha, p.beta), _linear_pair(m, p.gamma, p.delta)
    if case in ("ii", "iii"):
        m0 = _need_even(p.m0, case)
        _nonzero(p.alpha, "alpha", case)
        if strict:
            a = _need_nonzero_additive(p.a, case)
        else:
            a = p.a if p.a is not None else AdditiveFunction.zero(grp)
        ab = p.alpha * p.beta
        F1 = _times_m0(m0, a, 0.5, (ab + p.gamma) / 2) + T
        # the additive part enters F2 with a minus sign only in case (ii)
        sign = -1 if case == "ii" else 1
        F2 = _times_m0(m0, a, sign * 0.5, (ab - p.gamma) / 2) - T
        g_lin = _times_m0(m0, a, 1 / p.alpha, p.beta)
        if case == "ii":
            return F1, F2, _exp(m0, p.alpha), g_lin
        return F1, F2, g_lin, _exp(m0, p.alpha)
    if case == "iv":
        h = _arbitrary_slot(p.h_arbitrary, grp, "any", "h", case)
        return T, -T, _zero(grp), h
    if case == "v":
        g = _arbitrary_slot(p.g_arbitrary, grp, "any", "g", case)
        return T, -T, g, _zero(grp)
    raise ParameterError(f"unknown combined case {case!r}; expected one of {COMBINED_CASES}")


def build(theorem: Theorem | str, case: str, params: SolutionParams, strict: bool = True) -> SolutionFamily:
    theorem = Theorem(theorem)
    if theorem is Theorem.EVEN:
        F, g, he = build_even_case(case, params)
        fns = {"F": F, "g": g, "h_e": he}
    elif theorem is Theorem.ODD:
        H, g, ho = build_odd_case(case, params)
        fns = {"H": H, "g": g, "h_o": ho}
    else:
        F1, F2, g, h = build_combined_case(case, params, strict=strict)
        fns = {"F1": F1, "F2": F2, "g": g, "h": h}
    return SolutionFamily(theorem, case, params, fns)


def split_FH(F1: GroupFunction, F2: GroupFunction) -> tuple[GroupFunction, GroupFunction]:
    """F = F1 + F2, H = F1 - F2."""
    if F1.group != F2.group:
        raise ValueError(f"F1 lives on {F1.group}, F2 on {F2.group}")
    return F1 + F2, F1 - F2


def compose_FH(F: GroupFunction, H: GroupFunction) -> tuple[GroupFunction, GroupFunction]:
    """Inverse of split_FH: F1 = (F + H)/2, F2 = (F - H)/2."""
    if F.group != H.group:
        raise ValueError(f"F lives on {F.group}, H on {H.group}")
    return (F + H).scale(0.5), (F - H).scale(0.5)


def is_two_divisible(group: GroupSpec) -> bool:
    """G = 2G; then every 2G-periodic function is constant."""
    return group.n_coset_bits == 0


# -- pairing -----------------------------------------------------------------


@dataclass(frozen=True)
class CombinedCase:
    case: str
    params: SolutionParams
    degenerate: bool = False
    note: str = ""


@dataclass(frozen=True)
class Incompatible:
    reason: str

    def __bool__(self) -> bool:
        return False


_IMPOSSIBLE_EVEN_I = "requires m = m_check = m0, but even case (i) demands m != m_check"
_IMPOSSIBLE_EVEN_III = "odd case (ii) has g = m0/alpha != 0, but even case (iii) forces g = 0"

# (even case, odd case) -> combined case id, or an Incompatible with the forcing contradiction
PAIRING_TABLE: Mapping[tuple[str, str], str | Incompatible] = {
    ("i", "i"): "i",
    ("i", "ii"): Incompatible(_IMPOSSIBLE_EVEN_I),
    ("i", "iii"): "iv",
    ("i", "iv"): "i",
    ("i", "v"): "iv",
    ("i", "vi"): "i",
    ("ii", "i"): Incompatible("requires m = m_check = m0, but odd case (i) demands m != m_check"),
    ("ii", "ii"): "ii",
    ("ii", "iii"): "iii",
    ("ii", "iv"): "iii",
    ("ii", "v"): "iii",
    ("ii", "vi"): "iii",
    ("iii", "i"): "iv",
    ("iii", "ii"): Incompatible(_IMPOSSIBLE_EVEN_III),
    ("iii", "iii"): "iv",
    ("iii", "iv"): "iv",
    ("iii", "v"): "iv",
    ("iii", "vi"): "iv",
    ("iv", "i"): "i",
    ("iv", "ii"): "ii",
    ("iv", "iii"): "iv",
    ("iv", "iv"): "v",
    ("iv", "v"): "iv",
    ("iv", "vi"): "v",
}


def classify_pair(even_case: str, odd_case: str) -> str | Incompatible:
    try:
        return PAIRING_TABLE[(even_case, odd_case)]
    except KeyError:
        raise ParameterError(f"no such pair: even ({even_case}) with odd ({odd_case})") from None


def _same_function(f: GroupFunction, g: GroupFunction, tol: float = DEFAULT_TOL) -> bool:
    if f.group.is_finite:
        return all(abs(f(x) - g(x)) <= tol for x in enumerate_elements(f.group))
    fe, ge = f.as_exppoly(), g.as_exppoly()
    if fe is None or ge is None:
        return False
    diff = fe - ge
    return all(abs(t.constant) <= tol and t.additive.is_zero(tol) for t in diff.terms) and (
        diff.periodic is None or diff.periodic.is_zero(tol)
    )


def _adopt_g(
    slot: GroupFunction | None, g: GroupFunction, side: str
) -> Incompatible | None:
    """An arbitrary g slot takes the other side's g; a supplied filler must agree."""
    if slot is None or isinstance(slot, Arbitrary) or isinstance(g, Arbitrary):
        return None
    if not _same_function(slot, g):
        return Incompatible(f"the {side} side's g filler differs from the g forced by the other case")
    return None


def _sum_slots(u: GroupFunction, v: GroupFunction) -> GroupFunction:
    if isinstance(u, Arbitrary) or isinstance(v, Arbitrary):
        return Arbitrary(u.group, "any")
    return u + v


def _orient_odd_i(odd: SolutionParams, m: Exponential) -> SolutionParams | None:
    """Re-express odd case (i) data in terms of m (swap if the odd side used m_check)."""
    if odd.m == m:
        return odd
    if odd.m == m.inverse():
        return replace(odd, m=m, alpha=odd.beta, beta=odd.alpha, gamma=-odd.gamma)
    return None


def _canonical_combined_i(p: SolutionParams) -> SolutionParams:
    m, flipped = canonical_orientation(p.m)
    if not flipped:
        return p
    return replace(p, m=m, alpha=p.beta, beta=p.alpha, gamma=p.delta, delta=p.gamma)


def _half_T(p: SolutionParams) -> TwoGPeriodic | None:
    return p.T.scaled(0.5) if p.T is not None else None


def pair_cases(
    even_case: str, odd_case: str, even_params: SolutionParams, odd_params: SolutionParams
) -> CombinedCase | Incompatible:
    """Combine an even-half solution and an odd-half solution sharing the same g.

    Both inputs are validated first. The table-level verdict comes from
    ``PAIRING_TABLE``; the concrete parameters must then agree on g.
    """
    F, g_e, h_e = build_even_case(even_case, even_params)
    H, g_o, h_o = build_odd_case(odd_case, odd_params)
    if F.group != H.group:
        raise ParameterError(f"even side lives on {F.group}, odd side on {H.group}")
    grp = F.group
    verdict = classify_pair(even_case, odd_case)
    if isinstance(verdict, Incompatible):
        return verdict

    e, o = even_params, odd_params
    odd_T = o.T if odd_case in ("i", "ii", "iii", "iv") else None
    T_c = _half_T(replace(o, T=odd_T))
    h = _sum_slots(h_e, h_o)

    if verdict == "iv":
        # g = 0 on both sides
        for side, gfun, case in (("even", g_e, even_case), ("odd", g_o, odd_case)):
            if isinstance(gfun, Arbitrary):
                continue
            if not _same_function(gfun, _zero(grp)):
                return Incompatible(f"pairing forces g = 0, but {side} case ({case}) has nonzero g")
        return CombinedCase("iv", SolutionParams(T=T_c, h_arbitrary=h, group=grp))

    if verdict == "v":
        bad = _adopt_g(e.g_arbitrary, g_o, "even") or _adopt_g(o.g_arbitrary, g_e, "odd")
        if bad:
            return bad
        g = g_e if not isinstance(g_e, Arbitrary) else g_o
        return CombinedCase("v", SolutionParams(T=T_c, g_arbitrary=None if isinstance(g, Arbitrary) else g, group=grp))

    if verdict == "i":
        if even_case == "i" and odd_case == "i":
            o2 = _orient_odd_i(o, e.m)
            if o2 is None:
                return Incompatible("g forms differ: odd case uses an exponential other than m or m_check")
            if not (_close(e.alpha, o2.alpha) and _close(e.beta, o2.beta)):
                return Incompatible("g forms differ: (alpha, beta) disagree between the even and odd case")
            gp, gpp = e.gamma, o2.gamma
            p = SolutionParams(alpha=e.alpha, beta=e.beta, gamma=(gp + gpp) / 2, delta=(gp - gpp) / 2, m=e.m, T=T_c)
        elif even_case == "i":
            bad = _adopt_g(o.g_arbitrary, g_e, "odd")
            if bad:
                return bad
            half = e.gamma / 2
            p = SolutionParams(alpha=e.alpha, beta=e.beta, gamma=half, delta=half, m=e.m, T=T_c)
        else:
            bad = _adopt_g(e.g_arbitrary, g_o, "even")
            if bad:
                return bad
            half = o.gamma / 2
            p = SolutionParams(alpha=o.alpha, beta=o.beta, gamma=half, delta=-half, m=o.m, T=T_c)
        return CombinedCase("i", _canonical_combined_i(p))

    if verdict == "ii":
        if even_case == "ii":
            if e.m0 != o.m0:
                return Incompatible("g forms differ: the even and odd case use different m0")
            if e.a is not None and not e.a.is_zero(DEFAULT_TOL):
                return Incompatible("g forms differ: odd case (ii) has g = m0/alpha with no additive part")
            if not _close(e.beta * o.alpha, 1):
                return Incompatible("g forms differ: need beta (even) = 1/alpha (odd)")
            p = SolutionParams(alpha=e.beta, beta=e.alpha, gamma=o.b, a=o.a, m0=o.m0, T=T_c)
        else:
            bad = _adopt_g(e.g_arbitrary, g_o, "even")
            if bad:
                return bad
            p = SolutionParams(alpha=1 / o.alpha, beta=0, gamma=o.b, a=o.a, m0=o.m0, T=T_c)
        return CombinedCase("ii", p)

    # verdict == "iii": even case (ii) with an odd case whose g is 0 or arbitrary
    a = e.a if e.a is not None else AdditiveFunction.zero(grp)
    if odd_case in ("iii", "v"):
        if not (a.is_zero(DEFAULT_TOL) and _close(e.beta, 0)):
            return Incompatible("pairing forces g = 0, but even case (ii) has nonzero g")
        p = SolutionParams(alpha=e.alpha, beta=0, gamma=0, a=a, m0=e.m0, T=T_c)
        return CombinedCase(
            "iii",
            p,
            degenerate=True,
            note="g = 0 here, so a = 0; the odd part of h left free by the odd case is dropped "
            "(the full solution set with g = 0 is combined case (iv))",
        )
    bad = _adopt_g(o.g_arbitrary, g_e, "odd")
    if bad:
        return bad
    p = SolutionParams(alpha=e.alpha, beta=e.beta, gamma=0, a=a, m0=e.m0, T=T_c)
    degenerate = a.is_zero(DEFAULT_TOL)
    return CombinedCase("iii", p, degenerate=degenerate, note="a = 0 (additive part vanishes)" if degenerate else "")


def build_paired(combined: CombinedCase) -> tuple[GroupFunction, GroupFunction, GroupFunction, GroupFunction]:
    return build_combined_case(combined.case, combined.params, strict=not combined.degenerate)
