"""Brute-force residual oracles and the rank-1 factorization check.

Every residual here sums the defining expression directly over the measure
atoms and the evaluation pairs; nothing is taken from the solvers' algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .functions import DEFAULT_TOL, GroupFunction
from .groups import Element, GroupSpec, add, enumerate_elements, neg, sub, window
from .measures import Measure, convolve, translate

DEFAULT_WINDOW = 10
RANK_RATIO = 1e-8


class EvaluationError(RuntimeError):
    """A function failed to evaluate during a residual sweep."""


@dataclass(frozen=True)
class Domain:
    """Evaluation pairs: the whole group if finite, else [-W, W] per free coordinate."""

    group: GroupSpec
    window: int = DEFAULT_WINDOW

    def points(self) -> list[Element]:
        return window(self.group, self.window)

    def to_json(self) -> dict:
        return {"group": self.group.to_json(), "window": None if self.group.is_finite else self.window}


@dataclass(frozen=True)
class Residual:
    value: float
    argmax: tuple[Element, Element] | None = None

    def passed(self, tol: float = DEFAULT_TOL) -> bool:
        return self.value <= tol

    def __float__(self) -> float:
        return self.value


def _sweep(domain: Domain, pointwise: Callable[[Element, Element], complex]) -> Residual:
    best, arg = 0.0, None
    pts = domain.points()
    for x in pts:
        for y in pts:
            try:
                r = abs(pointwise(x, y))
            except Exception as exc:
                if isinstance(exc, EvaluationError):
                    raise
                raise EvaluationError(f"evaluation failed at x={x}, y={y}: {exc}") from exc
            if arg is None or r > best:
                best, arg = r, (x, y)
    return Residual(best, arg)


def sincos_lhs(f1: GroupFunction, f2: GroupFunction, mu: Measure, x: Element, y: Element) -> complex:
    """sum_t [f1(x+y-t) + f2(x-y+t)] mu(t), summed atom by atom."""
    G = mu.group
    s, d = add(G, x, y), sub(G, x, y)
    total = 0j
    for t, w in mu.atoms.items():
        try:
            total += (f1(sub(G, s, t)) + f2(add(G, d, t))) * w
        except EvaluationError:
            raise
        except Exception as exc:
            raise EvaluationError(f"evaluation failed at x={x}, y={y}, t={t}: {exc}") from exc
    return total


def residual_sincos(
    f1: GroupFunction, f2: GroupFunction, g: GroupFunction, h: GroupFunction, mu: Measure, domain: Domain
) -> Residual:
    """max |sum_t [f1(x+y-t) + f2(x-y+t)] mu(t) - g(x) h(y)|."""
    return _sweep(domain, lambda x, y: sincos_lhs(f1, f2, mu, x, y) - g(x) * h(y))


def sincos_lhs_convolution_form(f1: GroupFunction, f2: GroupFunction, mu: Measure, x: Element, y: Element) -> complex:
    """(f1 * mu)(x + y) + (f2_check * mu)(x - y), via the measures module.

    This equals ``sincos_lhs(f1, f2, mu, y, x)``: the convolution form holds
    with the roles of g and h interchanged.
    """
    G = mu.group
    return convolve(f1, mu, add(G, x, y)) + convolve(f2.reflect(), mu, sub(G, x, y))


def residual_sincos_convolution_form(
    f1: GroupFunction, f2: GroupFunction, g: GroupFunction, h: GroupFunction, mu: Measure, domain: Domain
) -> Residual:
    """max |(f1*mu)(x+y) + (f2_check*mu)(x-y) - h(x) g(y)|."""
    return _sweep(domain, lambda x, y: sincos_lhs_convolution_form(f1, f2, mu, x, y) - h(x) * g(y))


def residual_dalem1(F1: GroupFunction, F2: GroupFunction, g: GroupFunction, h: GroupFunction, domain: Domain) -> Residual:
    """max |F1(x+y) + F2(x-y) - g(x) h(y)|."""
    G = domain.group
    return _sweep(domain, lambda x, y: F1(add(G, x, y)) + F2(sub(G, x, y)) - g(x) * h(y))


def residual_even(F: GroupFunction, g: GroupFunction, h_e: GroupFunction, domain: Domain) -> Residual:
    """max |F(x+y) + F(x-y) - 2 g(x) h_e(y)|."""
    G = domain.group
    return _sweep(domain, lambda x, y: F(add(G, x, y)) + F(sub(G, x, y)) - 2 * g(x) * h_e(y))


def residual_odd(H: GroupFunction, g: GroupFunction, h_o: GroupFunction, domain: Domain) -> Residual:
    """max |H(x+y) - H(x-y) - 2 g(x) h_o(y)|."""
    G = domain.group
    return _sweep(domain, lambda x, y: H(add(G, x, y)) - H(sub(G, x, y)) - 2 * g(x) * h_o(y))


def residual_fech(f: GroupFunction, k: GroupFunction, mu: Measure, domain: Domain) -> Residual:
    """sum_t [f(x+y-t) + f(x-y+t)] mu(t) = f(x) k(y)."""
    return residual_sincos(f, f, f, k, mu, domain)


def residual_wilson_modified(f: GroupFunction, k: GroupFunction, mu: Measure, domain: Domain) -> Residual:
    """sum_t [f(x+y-t) + f(x-y+t)] mu(t) = k(x) f(y)."""
    return residual_sincos(f, f, k, f, mu, domain)


def residual_gajda(f: GroupFunction, mu: Measure, domain: Domain) -> Residual:
    return residual_sincos(f, f, f, f, mu, domain)


def residual_dalembert(f: GroupFunction, domain: Domain) -> Residual:
    """max |f(x+y) + f(x-y) - 2 f(x) f(y)|."""
    G = domain.group
    return _sweep(domain, lambda x, y: f(add(G, x, y)) + f(sub(G, x, y)) - 2 * f(x) * f(y))


def residual_dalembert_convolution(f: GroupFunction, domain: Domain) -> Residual:
    """max |f*(delta_y/2)(x) + f*(delta_{-y}/2)(x) - f(x) f(y)|."""
    G = domain.group
    half = Measure.dirac(G, None, 0.5)

    def pointwise(x, y):
        return convolve(f, translate(half, y), x) + convolve(f, translate(half, neg(G, y)), x) - f(x) * f(y)

    return _sweep(domain, pointwise)


# -- rank-1 oracle ------------------------------------------------------------


@dataclass
class Rank1:
    g: np.ndarray
    h: np.ndarray
    sigma: np.ndarray
    zero: bool = False

    def reconstruct(self) -> np.ndarray:
        return np.outer(self.g, self.h)


@dataclass
class NotRank1:
    sigma2: float
    ratio: float
    sigma: np.ndarray

    def __bool__(self) -> bool:
        return False


def rank1_factorize(L: np.ndarray, tol: float = RANK_RATIO, zero_tol: float = 1e-12) -> Rank1 | NotRank1:
    """Factor L[x, y] = g[x] h[y] when L has numerical rank <= 1.

    Rank is read off the two largest singular values (ratio test). g is
    scaled to 1 at its first nonzero entry. The zero matrix returns
    ``zero=True`` with g = h = 0.
    """
    L = np.asarray(L, dtype=complex)
    if L.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {L.shape}")
    U, s, Vh = np.linalg.svd(L)
    if s.size == 0 or s[0] <= zero_tol:
        return Rank1(np.zeros(L.shape[0], complex), np.zeros(L.shape[1], complex), s, zero=True)
    if s.size > 1 and s[1] / s[0] > tol:
        return NotRank1(float(s[1]), float(s[1] / s[0]), s)
    g = U[:, 0] * s[0]
    h = Vh[0, :].copy()
    i = int(np.argmax(np.abs(g) > 1e-12 * np.abs(g).max()))
    pivot = g[i]
    return Rank1(g / pivot, h * pivot, s)


def lhs_matrix(F1: GroupFunction, F2: GroupFunction, group: GroupSpec) -> np.ndarray:
    """L[x][y] = F1(x + y) + F2(x - y) over the enumerated finite group."""
    elems = enumerate_elements(group)
    return np.array([[F1(add(group, x, y)) + F2(sub(group, x, y)) for y in elems] for x in elems], dtype=complex)


def cross_ratio_deviation(u: Sequence[complex], v: Sequence[complex]) -> float:
    """Relative distance of u from c * v for the best complex scalar c; 0 iff proportional."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    scale = np.abs(u).max(initial=0.0)
    if scale == 0 or not np.any(v):
        return 0.0 if scale == 0 and not np.any(v) else 1.0
    c = np.vdot(v, u) / np.vdot(v, v)
    return float(np.abs(u - c * v).max() / scale)
