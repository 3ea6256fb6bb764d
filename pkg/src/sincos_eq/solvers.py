"""Solution families of the measure-twisted equations

    sum_t [f(x+y-t) + f(x-y+t)] mu(t) = f(x) k(y)      ("fech")
    sum_t [f(x+y-t) + f(x-y+t)] mu(t) = k(x) f(y)      ("wilson_modified")

and their Gajda (f = k) and d'Alembert (mu = delta_0 / 2) specializations.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable

from .families import ParameterError
from .functions import (
    AdditiveFunction,
    DEFAULT_TOL,
    Exponential,
    ExpPolyFunction,
    canonical_orientation,
    enumerate_exponentials,
)
from .groups import GroupSpec, coset_2g, window
from .measures import Convolved, Measure, invert, mu_hat

log = logging.getLogger(__name__)

EXP_PAIR = "exp_pair"
ADDITIVE_EVEN = "additive_even"
NONEVEN_EXP = "noneven_exp"
EVEN_EXP = "even_exp"

# |mu_hat| within this factor of the tolerance gets flagged in reports
NEAR_THRESHOLD_FACTOR = 1e3


@dataclass
class FechFamily:
    kind: str
    m: Exponential
    f: ExpPolyFunction
    k: ExpPolyFunction
    gamma: complex = 0
    delta: complex = 0
    beta: complex = 0
    a: AdditiveFunction | None = None
    mu_hat_m: complex = 0
    mu_hat_m_check: complex = 0
    near_threshold: bool = False

    @property
    def case(self) -> str:
        return "i" if self.kind == EXP_PAIR else "ii"


@dataclass
class WilsonModFamily:
    kind: str
    m: Exponential
    alpha: complex
    f: ExpPolyFunction
    k: ExpPolyFunction
    mu_hat_m: complex = 0
    mu_hat_m_check: complex = 0
    near_threshold: bool = False

    @property
    def case(self) -> str:
        return "i" if self.kind == NONEVEN_EXP else "ii"


@dataclass
class NecessityResult:
    holds: bool
    residual: float
    detail: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.holds


def candidate_exponentials(group: GroupSpec, exponentials: Iterable[Exponential] | str | None) -> list[Exponential]:
    if exponentials is None or exponentials == "all":
        return enumerate_exponentials(group)
    return list(exponentials)


def _pair(m: Exponential, u: complex, v: complex) -> ExpPolyFunction:
    return ExpPolyFunction.monomial(m, u) + ExpPolyFunction.monomial(m.inverse(), v)


def _near(value: complex, tol: float) -> bool:
    return abs(value) <= NEAR_THRESHOLD_FACTOR * tol


def fech_exp_pair(mu: Measure, m: Exponential, gamma: complex, delta: complex) -> FechFamily:
    """f = gamma m + delta m_check, k = mu_hat(m) m + mu_hat(m_check) m_check."""
    c, cc = mu_hat(mu, m), mu_hat(mu, m.inverse())
    return FechFamily(
        EXP_PAIR, m, _pair(m, gamma, delta), _pair(m, c, cc),
        gamma=gamma, delta=delta, mu_hat_m=c, mu_hat_m_check=cc,
    )


def fech_additive_even(
    mu: Measure, m0: Exponential, beta: complex, a: AdditiveFunction | None = None, tol: float = DEFAULT_TOL
) -> FechFamily:
    """f = [a / (2 mu_hat(m0)) + beta] m0, k = 2 mu_hat(m0) m0."""
    if not m0.is_even:
        raise ParameterError(f"{m0!r} is not even")
    c = mu_hat(mu, m0)
    if abs(c) <= tol:
        raise ParameterError(f"mu_hat(m0) = {c} vanishes; no solution of this kind")
    a = a if a is not None else AdditiveFunction.zero(m0.group)
    f = ExpPolyFunction.monomial(m0, beta, a.scaled(1 / (2 * c)))
    k = ExpPolyFunction.monomial(m0, 2 * c)
    return FechFamily(ADDITIVE_EVEN, m0, f, k, beta=beta, a=a, mu_hat_m=c, mu_hat_m_check=c)


def solve_fech(
    mu: Measure,
    exponentials: Iterable[Exponential] | str | None = "all",
    gamma: complex = 1,
    delta: complex = 1,
    beta: complex = 1,
    a: AdditiveFunction | None = None,
    tol: float = DEFAULT_TOL,
) -> list[FechFamily]:
    """Every family of the f(x)k(y) equation over the candidate exponentials.

    Family (i) is emitted for each candidate, even or not; family (ii) for
    each even candidate with mu_hat(m0) != 0. Candidates giving f = 0 or
    k = 0 are dropped.
    """
    out: list[FechFamily] = []
    for m in candidate_exponentials(mu.group, exponentials):
        fam = fech_exp_pair(mu, m, gamma, delta)
        if fam.f.is_zero() or _is_small(fam.k, tol):
            log.debug("dropping exp-pair family at %r: f or k vanishes", m)
        else:
            fam.near_threshold = max(abs(fam.mu_hat_m), abs(fam.mu_hat_m_check)) <= NEAR_THRESHOLD_FACTOR * tol
            out.append(fam)
        if m.is_even:
            c = mu_hat(mu, m)
            if abs(c) <= tol:
                log.debug("no additive family at %r: mu_hat = %s", m, c)
                continue
            fam2 = fech_additive_even(mu, m, beta, a, tol)
            if fam2.f.is_zero():
                continue
            fam2.near_threshold = _near(c, tol)
            out.append(fam2)
    return out


def _is_small(f: ExpPolyFunction, tol: float) -> bool:
    return all(abs(t.constant) <= tol and t.additive.is_zero(tol) for t in f.terms) and f.periodic is None


def necessity_check_fech_case1(
    mu: Measure,
    m: Exponential,
    alpha: complex,
    beta: complex,
    gamma: complex,
    delta: complex,
    tol: float = DEFAULT_TOL,
) -> NecessityResult:
    """Coefficient system for f = gamma m + delta m_check, k = alpha m + beta m_check.

    gamma mu_hat(m) = alpha gamma,   gamma mu_hat(m_check) = beta gamma,
    delta mu_hat(m) = alpha delta,   delta mu_hat(m_check) = beta delta.
    """
    if abs(gamma) <= tol and abs(delta) <= tol:
        raise ParameterError("gamma and delta cannot both vanish (f would be 0)")
    c, cc = mu_hat(mu, m), mu_hat(mu, m.inverse())
    eqs = [gamma * (c - alpha), gamma * (cc - beta), delta * (c - alpha), delta * (cc - beta)]
    res = max(abs(e) for e in eqs)
    return NecessityResult(res <= tol, res, {"mu_hat_m": c, "mu_hat_m_check": cc})


def fech_second_case(
    mu: Measure, m0: Exponential, alpha: complex, beta: complex, a: AdditiveFunction | None = None,
    tol: float = DEFAULT_TOL,
) -> NecessityResult:
    """f = alpha m0, k = [a/alpha + beta] m0 solves iff a = 0 and beta = 2 mu_hat(m0).

    Such a solution is already family (i) with m = m0 and gamma + delta = alpha,
    so the detail carries that cross-reference instead of a new family.
    """
    if not m0.is_even:
        raise ParameterError(f"{m0!r} is not even")
    if abs(alpha) <= tol:
        raise ParameterError("alpha must be nonzero")
    c = mu_hat(mu, m0)
    a_size = 0.0 if a is None else max((abs(v) for v in a.free_coeffs), default=0.0)
    res = max(a_size, abs(beta - 2 * c))
    detail = {"mu_hat_m0": c, "same_as": {"family": "i", "m": m0, "gamma_plus_delta": alpha}}
    return NecessityResult(res <= tol, res, detail)


def necessity_check_fech_case3(
    mu: Measure,
    m0: Exponential,
    alpha: complex,
    a: AdditiveFunction | None = None,
    beta: complex = 1,
    gamma: complex = 0,
    half_width: int = 4,
    tol: float = DEFAULT_TOL,
) -> NecessityResult:
    """f = [a/alpha + beta] m0, k = alpha m0 solves iff alpha = 2 mu_hat(m0).

    Also reconstructs T from both convolution identities
    f*mu = (a + alpha beta + gamma) m0 / 2 + T and
    f_check*mu reflected = (a + alpha beta - gamma) m0 / 2 - T
    and checks the two agree and are constant on cosets of 2G.
    """
    if not m0.is_even:
        raise ParameterError(f"{m0!r} is not even")
    if abs(alpha) <= tol:
        raise ParameterError("alpha must be nonzero")
    grp = m0.group
    a = a if a is not None else AdditiveFunction.zero(grp)
    c = mu_hat(mu, m0)
    f = ExpPolyFunction.monomial(m0, beta, a.scaled(1 / alpha))
    F1 = Convolved(f, mu)
    F2 = Convolved(f, invert(mu))  # z -> sum_t f(z + t) mu(t)
    base = ExpPolyFunction.monomial(m0, alpha * beta, a)
    g_shift = ExpPolyFunction.monomial(m0, gamma)

    def T1(x):
        return F1(x) - 0.5 * (base(x) + g_shift(x))

    def T2(x):
        return 0.5 * (base(x) - g_shift(x)) - F2(x)

    pts = window(grp, half_width)
    imbalance = max(abs(T1(x) - T2(x)) for x in pts)
    by_coset: dict[tuple, complex] = {}
    spread = 0.0
    for x in pts:
        key = coset_2g(grp, x)
        v = T1(x)
        if key in by_coset:
            spread = max(spread, abs(v - by_coset[key]))
        else:
            by_coset[key] = v
    alpha_gap = abs(alpha - 2 * c)
    res = max(alpha_gap, imbalance, spread)
    detail = {"mu_hat_m0": c, "alpha_gap": alpha_gap, "T_imbalance": imbalance, "T_coset_spread": spread}
    return NecessityResult(res <= tol, res, detail)


def solve_wilson_modified(
    mu: Measure,
    exponentials: Iterable[Exponential] | str | None = "all",
    alpha: complex = 1,
    tol: float = DEFAULT_TOL,
) -> list[WilsonModFamily]:
    """Families of the k(x)f(y) equation; no additive term ever occurs.

    Non-even m: f = alpha (mu_hat(m) m + mu_hat(m_check) m_check), k = f / alpha.
    Even m0 with mu_hat(m0) != 0: f = 2 alpha mu_hat(m0) m0, k = 2 mu_hat(m0) m0.
    m and m_check give the same family, so only one orientation is kept.
    """
    if abs(alpha) <= tol:
        raise ParameterError("alpha must be nonzero")
    out: list[WilsonModFamily] = []
    seen: set[Exponential] = set()
    for m in candidate_exponentials(mu.group, exponentials):
        c, cc = mu_hat(mu, m), mu_hat(mu, m.inverse())
        if m.is_even:
            if abs(c) <= tol:
                continue
            k = ExpPolyFunction.monomial(m, 2 * c)
            out.append(WilsonModFamily(EVEN_EXP, m, alpha, k.scale(alpha), k, c, c, _near(c, tol)))
            continue
        canon, _ = canonical_orientation(m)
        if canon in seen:
            continue
        seen.add(canon)
        k = _pair(m, c, cc)
        if _is_small(k, tol):
            continue
        near = max(abs(c), abs(cc)) <= NEAR_THRESHOLD_FACTOR * tol
        out.append(WilsonModFamily(NONEVEN_EXP, m, alpha, k.scale(alpha), k, c, cc, near))
    return out


def reduce_gajda(mu: Measure, m: Exponential) -> ExpPolyFunction:
    """The f = k solution mu_hat(m) m + mu_hat(m_check) m_check."""
    return _pair(m, mu_hat(mu, m), mu_hat(mu, m.inverse()))


def dalembert_measure(group: GroupSpec) -> Measure:
    return Measure.dirac(group, None, 0.5)


def reduce_dalembert(m: Exponential) -> ExpPolyFunction:
    """(m + m_check) / 2."""
    return reduce_gajda(dalembert_measure(m.group), m)


def perturb_k(fam: FechFamily | WilsonModFamily, eps: complex, which: str = "m") -> ExpPolyFunction:
    """k with the coefficient of m (or m_check) shifted by eps."""
    target = fam.m if which == "m" else fam.m.inverse()
    return fam.k + ExpPolyFunction.monomial(target, eps)

