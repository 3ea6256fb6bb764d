"""Functions on finitely generated abelian groups.

Every closed-form solution is a sum of terms ``(a(x) + b) * m(x)`` with ``m``
an exponential and ``a`` additive, plus an optional 2G-periodic addend.
``TableFunction`` covers the "arbitrary function" slots on finite groups.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .groups import (
    CosetIndex,
    DimensionError,
    Element,
    GroupSpec,
    UnsupportedDomainError,
    all_cosets_2g,
    coset_2g,
    enumerate_elements,
    neg,
)
from .jsonio import ConfigError, dump_complex, parse_complex

DEFAULT_TOL = 1e-9

# exact values of exp(2*pi*i*r) for r in quarter turns
_QUARTER = {Fraction(0): 1 + 0j, Fraction(1, 4): 1j, Fraction(1, 2): -1 + 0j, Fraction(3, 4): -1j}


class UnrealizedFunctionError(RuntimeError):
    """Evaluation of an "arbitrary function" slot that was never filled in."""


def root_of_unity(turns: Fraction) -> complex:
    turns = turns % 1
    exact = _QUARTER.get(turns)
    if exact is not None:
        return exact
    return cmath.exp(2j * cmath.pi * float(turns))


class GroupFunction:
    """Base class: a complex-valued function on ``self.group``."""

    group: GroupSpec

    def __call__(self, x: Sequence[int]) -> complex:
        raise NotImplementedError

    def reflect(self) -> GroupFunction:
        """The function x -> f(-x)."""
        raise NotImplementedError

    def as_exppoly(self) -> ExpPolyFunction | None:
        return None

    def values(self, points: Iterable[Sequence[int]]) -> list[complex]:
        return [self(x) for x in points]

    def _combine(self, other: GroupFunction, sign: int) -> GroupFunction:
        if other.group != self.group:
            raise DimensionError(f"cannot combine functions on {self.group} and {other.group}")
        a, b = self.as_exppoly(), other.as_exppoly()
        if a is not None and b is not None:
            return a._add(b, sign)
        if self.group.is_finite:
            return TableFunction.from_callable(self.group, lambda x: self(x) + sign * other(x))
        raise TypeError(f"cannot combine {type(self).__name__} and {type(other).__name__} on an infinite group")

    def __add__(self, other: GroupFunction) -> GroupFunction:
        if not isinstance(other, GroupFunction):
            return NotImplemented
        return self._combine(other, 1)

    def __sub__(self, other: GroupFunction) -> GroupFunction:
        if not isinstance(other, GroupFunction):
            return NotImplemented
        return self._combine(other, -1)

    def __neg__(self) -> GroupFunction:
        return self.scale(-1)

    def __mul__(self, c: complex) -> GroupFunction:
        if isinstance(c, GroupFunction):
            return NotImplemented
        return self.scale(complex(c))

    __rmul__ = __mul__

    def __truediv__(self, c: complex) -> GroupFunction:
        return self.scale(1 / complex(c))

    def scale(self, c: complex) -> GroupFunction:
        e = self.as_exppoly()
        if e is not None:
            return e.scale(c)
        if self.group.is_finite:
            return TableFunction.from_callable(self.group, lambda x: c * self(x))
        raise TypeError(f"cannot scale {type(self).__name__} on an infinite group")


@dataclass(frozen=True, eq=False)
class Exponential(GroupFunction):
    """Multiplicative function m(x + y) = m(x) m(y).

    On torsion coordinate j the value of the generator is the root of unity
    exp(2 pi i k_j / n_j), stored as the integer ``k_j``. Free coordinate i
    has an arbitrary nonzero multiplier ``lambda_i``.
    """

    group: GroupSpec
    torsion_roots: tuple[int, ...] = ()
    free_multipliers: tuple[complex, ...] = ()

    def __post_init__(self) -> None:
        g = self.group
        roots = tuple(int(k) % n for k, n in zip(self.torsion_roots, g.torsion))
        if len(self.torsion_roots) != len(g.torsion):
            raise DimensionError(f"need {len(g.torsion)} torsion roots, got {len(self.torsion_roots)}")
        mults = tuple(complex(v) for v in self.free_multipliers)
        if len(mults) != g.free_rank:
            raise DimensionError(f"need {g.free_rank} free multipliers, got {len(mults)}")
        if any(v == 0 for v in mults):
            raise ValueError("an exponential never vanishes: free multipliers must be nonzero")
        object.__setattr__(self, "torsion_roots", roots)
        object.__setattr__(self, "free_multipliers", mults)

    @classmethod
    def trivial(cls, group: GroupSpec) -> Exponential:
        return cls(group, (0,) * len(group.torsion), (1,) * group.free_rank)

    def __call__(self, x: Sequence[int]) -> complex:
        x = self.group.element(x)
        r = self.group.free_rank
        turns = sum(
            (Fraction(k * c, n) for k, c, n in zip(self.torsion_roots, x[r:], self.group.torsion)),
            Fraction(0),
        )
        value = root_of_unity(turns)
        for lam, c in zip(self.free_multipliers, x[:r]):
            value *= lam**c
        return value

    def key(self) -> tuple:
        mults = tuple((round(v.real, 12) + 0.0, round(v.imag, 12) + 0.0) for v in self.free_multipliers)
        return (self.torsion_roots, mults)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Exponential):
            return NotImplemented
        return self.group == other.group and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.group, self.key()))

    def inverse(self) -> Exponential:
        """The exponential x -> m(-x)."""
        return Exponential(
            self.group,
            tuple(-k for k in self.torsion_roots),
            tuple(1 / v for v in self.free_multipliers),
        )

    reflect = inverse

    @property
    def is_even(self) -> bool:
        return is_even_exponential(self)

    def as_exppoly(self) -> ExpPolyFunction:
        return ExpPolyFunction(self.group, (Term(self, AdditiveFunction.zero(self.group), 1),))

    def to_json(self) -> dict:
        return {
            "torsion_roots": list(self.torsion_roots),
            "free_multipliers": [dump_complex(v) for v in self.free_multipliers],
        }

    @classmethod
    def from_json(cls, group: GroupSpec, data: Mapping, field: str = "exponential") -> Exponential:
        roots = data.get("torsion_roots", [0] * len(group.torsion))
        mults = data.get("free_multipliers", [1] * group.free_rank)
        try:
            return cls(
                group,
                tuple(int(k) for k in roots),
                tuple(parse_complex(v, f"{field}.free_multipliers[{i}]") for i, v in enumerate(mults)),
            )
        except (DimensionError, ValueError, TypeError) as exc:
            raise ConfigError(f"{field}: {exc}") from exc

    def __repr__(self) -> str:
        parts = [f"k={list(self.torsion_roots)}"] if self.torsion_roots else []
        if self.free_multipliers:
            parts.append(f"lambda={list(self.free_multipliers)}")
        return f"Exponential({', '.join(parts) or 'trivial'})"


def orientation_key(m: Exponential) -> tuple:
    return m.key()


def canonical_orientation(m: Exponential) -> tuple[Exponential, bool]:
    """Pick the lexicographically smaller of m and its inverse; report whether it flipped."""
    mi = m.inverse()
    if orientation_key(mi) < orientation_key(m):
        return mi, True
    return m, False


@dataclass(frozen=True, eq=False)
class AdditiveFunction(GroupFunction):
    """a(x) = sum_i c_i x_i over free coordinates; zero on torsion."""

    group: GroupSpec
    free_coeffs: tuple[complex, ...] = ()

    def __post_init__(self) -> None:
        coeffs = tuple(complex(c) for c in self.free_coeffs)
        if len(coeffs) != self.group.free_rank:
            raise DimensionError(f"need {self.group.free_rank} additive coefficients, got {len(coeffs)}")
        object.__setattr__(self, "free_coeffs", coeffs)

    @classmethod
    def zero(cls, group: GroupSpec) -> AdditiveFunction:
        return cls(group, (0,) * group.free_rank)

    def __call__(self, x: Sequence[int]) -> complex:
        x = self.group.element(x)
        return sum((c * xi for c, xi in zip(self.free_coeffs, x)), 0j)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AdditiveFunction):
            return NotImplemented
        return self.group == other.group and self.free_coeffs == other.free_coeffs

    def __hash__(self) -> int:
        return hash((self.group, self.free_coeffs))

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(c) <= tol for c in self.free_coeffs)

    def scaled(self, c: complex) -> AdditiveFunction:
        return AdditiveFunction(self.group, tuple(c * v for v in self.free_coeffs))

    def plus(self, other: AdditiveFunction) -> AdditiveFunction:
        return AdditiveFunction(self.group, tuple(u + v for u, v in zip(self.free_coeffs, other.free_coeffs)))

    def reflect(self) -> AdditiveFunction:
        return self.scaled(-1)

    def as_exppoly(self) -> ExpPolyFunction:
        return ExpPolyFunction(self.group, (Term(Exponential.trivial(self.group), self, 0),))

    def to_json(self) -> dict:
        return {"free_coeffs": [dump_complex(c) for c in self.free_coeffs]}

    @classmethod
    def from_json(cls, group: GroupSpec, data: Mapping, field: str = "additive") -> AdditiveFunction:
        coeffs = data.get("free_coeffs", [0] * group.free_rank)
        try:
            return cls(group, tuple(parse_complex(c, f"{field}.free_coeffs[{i}]") for i, c in enumerate(coeffs)))
        except DimensionError as exc:
            raise ConfigError(f"{field}: {exc}") from exc


@dataclass(frozen=True, eq=False)
class TwoGPeriodic(GroupFunction):
    """Function constant on the cosets of 2G; cosets missing from the table map to 0."""

    group: GroupSpec
    table: Mapping[CosetIndex, complex] = field(default_factory=dict)

    def __post_init__(self) -> None:
        nbits = self.group.n_coset_bits
        clean: dict[CosetIndex, complex] = {}
        for bits, v in self.table.items():
            bits = tuple(int(b) % 2 for b in bits)
            if len(bits) != nbits:
                raise DimensionError(f"coset index {bits} needs {nbits} bits for {self.group}")
            clean[bits] = complex(v)
        object.__setattr__(self, "table", clean)

    @classmethod
    def from_values(cls, group: GroupSpec, values: Sequence[complex]) -> TwoGPeriodic:
        """Values listed in the order of ``all_cosets_2g(group)``."""
        cosets = all_cosets_2g(group)
        if len(values) != len(cosets):
            raise ValueError(f"{group} has {len(cosets)} cosets of 2G, got {len(values)} values")
        return cls(group, dict(zip(cosets, values)))

    @classmethod
    def constant(cls, group: GroupSpec, c: complex) -> TwoGPeriodic:
        return cls.from_values(group, [c] * len(all_cosets_2g(group)))

    def __call__(self, x: Sequence[int]) -> complex:
        return self.table.get(coset_2g(self.group, x), 0j)

    def reflect(self) -> TwoGPeriodic:
        return self

    def scaled(self, c: complex) -> TwoGPeriodic:
        return TwoGPeriodic(self.group, {k: c * v for k, v in self.table.items()})

    def plus(self, other: TwoGPeriodic) -> TwoGPeriodic:
        keys = set(self.table) | set(other.table)
        return TwoGPeriodic(self.group, {k: self.table.get(k, 0j) + other.table.get(k, 0j) for k in keys})

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(v) <= tol for v in self.table.values())

    def is_constant(self, tol: float = DEFAULT_TOL) -> bool:
        vals = [self.table.get(c, 0j) for c in all_cosets_2g(self.group)]
        return all(abs(v - vals[0]) <= tol for v in vals)

    def as_exppoly(self) -> ExpPolyFunction:
        return ExpPolyFunction(self.group, (), self)

    def to_json(self) -> dict:
        return {"table": {"".join(map(str, k)): dump_complex(v) for k, v in sorted(self.table.items())}}

    @classmethod
    def from_json(cls, group: GroupSpec, data: Mapping, field: str = "T") -> TwoGPeriodic:
        table = data.get("table", {})
        if not isinstance(table, Mapping):
            raise ConfigError(f"{field}.table: expected an object keyed by coset bit strings")
        parsed = {}
        for bits, v in table.items():
            if not all(ch in "01" for ch in bits):
                raise ConfigError(f"{field}.table: bad coset key {bits!r}")
            parsed[tuple(int(ch) for ch in bits)] = parse_complex(v, f"{field}.table[{bits}]")
        try:
            return cls(group, parsed)
        except DimensionError as exc:
            raise ConfigError(f"{field}: {exc}") from exc


@dataclass(frozen=True)
class Term:
    exponential: Exponential
    additive: AdditiveFunction
    constant: complex

    def __call__(self, x: Sequence[int]) -> complex:
        return (self.additive(x) + self.constant) * self.exponential(x)


@dataclass(frozen=True, eq=False)
class ExpPolyFunction(GroupFunction):
    """x -> sum_k (a_k(x) + b_k) m_k(x) + T(x).

    Terms are kept with pairwise distinct exponentials so the representation
    is unique.
    """

    group: GroupSpec
    terms: tuple[Term, ...] = ()
    periodic: TwoGPeriodic | None = None

    def __post_init__(self) -> None:
        merged: dict[Exponential, tuple[AdditiveFunction, complex]] = {}
        for t in self.terms:
            if t.exponential.group != self.group:
                raise DimensionError("term exponential lives on a different group")
            if t.exponential in merged:
                a, b = merged[t.exponential]
                merged[t.exponential] = (a.plus(t.additive), b + t.constant)
            else:
                merged[t.exponential] = (t.additive, complex(t.constant))
        terms = tuple(
            Term(m, a, b) for m, (a, b) in merged.items() if not (a.is_zero() and b == 0)
        )
        object.__setattr__(self, "terms", terms)
        if self.periodic is not None and self.periodic.is_zero():
            object.__setattr__(self, "periodic", None)

    @classmethod
    def zero(cls, group: GroupSpec) -> ExpPolyFunction:
        return cls(group)

    @classmethod
    def monomial(
        cls, m: Exponential, constant: complex = 1, additive: AdditiveFunction | None = None
    ) -> ExpPolyFunction:
        a = additive if additive is not None else AdditiveFunction.zero(m.group)
        return cls(m.group, (Term(m, a, constant),))

    def __call__(self, x: Sequence[int]) -> complex:
        if len(x) != self.group.dim:
            raise DimensionError(f"element {tuple(x)} does not conform to {self.group}")
        total = sum((t(x) for t in self.terms), 0j)
        if self.periodic is not None:
            total += self.periodic(x)
        return total

    def as_exppoly(self) -> ExpPolyFunction:
        return self

    def is_zero(self) -> bool:
        return not self.terms and self.periodic is None

    def _add(self, other: ExpPolyFunction, sign: int) -> ExpPolyFunction:
        other_terms = tuple(Term(t.exponential, t.additive.scaled(sign), sign * t.constant) for t in other.terms)
        periodic = self.periodic
        if other.periodic is not None:
            op = other.periodic.scaled(sign)
            periodic = op if periodic is None else periodic.plus(op)
        return ExpPolyFunction(self.group, self.terms + other_terms, periodic)

    def scale(self, c: complex) -> ExpPolyFunction:
        terms = tuple(Term(t.exponential, t.additive.scaled(c), c * t.constant) for t in self.terms)
        periodic = self.periodic.scaled(c) if self.periodic is not None else None
        return ExpPolyFunction(self.group, terms, periodic)

    def reflect(self) -> ExpPolyFunction:
        # (a(-x) + b) m(-x) = (-a(x) + b) m_check(x); T is even
        terms = tuple(Term(t.exponential.inverse(), t.additive.reflect(), t.constant) for t in self.terms)
        return ExpPolyFunction(self.group, terms, self.periodic)

    def has_additive_component(self, tol: float = DEFAULT_TOL) -> bool:
        return any(not t.additive.is_zero(tol) for t in self.terms)

    def to_json(self) -> dict:
        out: dict = {
            "terms": [
                {
                    "exponential": t.exponential.to_json(),
                    "additive": t.additive.to_json(),
                    "constant": dump_complex(t.constant),
                }
                for t in self.terms
            ]
        }
        if self.periodic is not None:
            out["periodic"] = self.periodic.to_json()
        return out

    @classmethod
    def from_json(cls, group: GroupSpec, data: Mapping, field: str = "function") -> ExpPolyFunction:
        if not isinstance(data, Mapping):
            raise ConfigError(f"{field}: expected an object with 'terms'")
        terms = []
        for i, t in enumerate(data.get("terms", [])):
            f = f"{field}.terms[{i}]"
            m = Exponential.from_json(group, t.get("exponential", {}), f + ".exponential")
            a = AdditiveFunction.from_json(group, t.get("additive", {}), f + ".additive")
            b = parse_complex(t.get("constant", 0), f + ".constant")
            terms.append(Term(m, a, b))
        periodic = None
        if "periodic" in data:
            periodic = TwoGPeriodic.from_json(group, data["periodic"], field + ".periodic")
        return cls(group, tuple(terms), periodic)

    def __repr__(self) -> str:
        parts = [f"({t.additive.free_coeffs}*x + {t.constant})*{t.exponential!r}" for t in self.terms]
        if self.periodic is not None:
            parts.append(f"T{dict(self.periodic.table)}")
        return "ExpPoly[" + " + ".join(parts or ["0"]) + "]"


@dataclass(frozen=True, eq=False)
class TableFunction(GroupFunction):
    """Dense value table on a finite group; houses arbitrary functions."""

    group: GroupSpec
    table: Mapping[Element, complex] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.group.is_finite:
            raise UnsupportedDomainError(f"value tables need a finite group, not {self.group}")
        clean = {self.group.element(k): complex(v) for k, v in self.table.items()}
        object.__setattr__(self, "table", clean)

    @classmethod
    def from_callable(cls, group: GroupSpec, f: Callable[[Element], complex]) -> TableFunction:
        return cls(group, {x: f(x) for x in enumerate_elements(group)})

    @classmethod
    def from_values(cls, group: GroupSpec, values: Sequence[complex]) -> TableFunction:
        """Values in the lexicographic order of ``enumerate_elements``."""
        elems = enumerate_elements(group)
        if len(values) != len(elems):
            raise ValueError(f"{group} has {len(elems)} elements, got {len(values)} values")
        return cls(group, dict(zip(elems, values)))

    def __call__(self, x: Sequence[int]) -> complex:
        return self.table.get(self.group.element(x), 0j)

    def reflect(self) -> TableFunction:
        return TableFunction(self.group, {neg(self.group, x): v for x, v in self.table.items()})

    def to_json(self) -> dict:
        return {"values": [dump_complex(self(x)) for x in enumerate_elements(self.group)]}

    @classmethod
    def from_json(cls, group: GroupSpec, data: Mapping, field: str = "table") -> TableFunction:
        vals = data.get("values")
        if not isinstance(vals, list):
            raise ConfigError(f"{field}.values: expected a list of [re, im]")
        try:
            return cls.from_values(group, [parse_complex(v, f"{field}.values[{i}]") for i, v in enumerate(vals)])
        except (ValueError, UnsupportedDomainError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"{field}: {exc}") from exc


@dataclass(frozen=True, eq=False)
class Arbitrary(GroupFunction):
    """Placeholder for an "arbitrary (even/odd) function" slot with no table supplied."""

    group: GroupSpec
    parity: str = "any"

    def __call__(self, x: Sequence[int]) -> complex:
        raise UnrealizedFunctionError(
            f"arbitrary {self.parity} function on {self.group} was not realized; supply a table"
        )

    def reflect(self) -> Arbitrary:
        return self

    def scale(self, c: complex) -> Arbitrary:
        return self

    def to_json(self) -> dict:
        return {"arbitrary": self.parity}


def function_from_json(group: GroupSpec, data: Mapping, field: str = "function") -> GroupFunction:
    if isinstance(data, Mapping) and "values" in data:
        return TableFunction.from_json(group, data, field)
    return ExpPolyFunction.from_json(group, data, field)


def function_to_json(f: GroupFunction) -> dict:
    if hasattr(f, "to_json"):
        return f.to_json()
    return {"callable": type(f).__name__}


def enumerate_exponentials(g: GroupSpec) -> list[Exponential]:
    """All characters of a finite group, one per root-index vector."""
    if not g.is_finite:
        raise UnsupportedDomainError(
            f"{g} has free coordinates; its exponentials lambda^x form a continuum"
        )
    return [Exponential(g, tuple(k), ()) for k in itertools.product(*(range(n) for n in g.torsion))]


def check_exponential(
    m: GroupFunction,
    samples: Iterable[tuple[Sequence[int], Sequence[int]]],
    tol: float = DEFAULT_TOL,
) -> tuple[bool, float]:
    """Test m(x + y) == m(x) m(y) on sample pairs; returns (ok, max deviation)."""
    from .groups import add

    worst = 0.0
    for x, y in samples:
        worst = max(worst, abs(m(add(m.group, x, y)) - m(x) * m(y)))
    return worst <= tol, worst


def is_even_exponential(m: Exponential, tol: float = DEFAULT_TOL) -> bool:
    """m == m_check, decided from the parameters rather than by sampling."""
    tors = all((2 * k) % n == 0 for k, n in zip(m.torsion_roots, m.group.torsion))
    free = all(abs(v - 1) <= tol or abs(v + 1) <= tol for v in m.free_multipliers)
    return tors and free


def even_part(f: GroupFunction) -> GroupFunction:
    if isinstance(f, Arbitrary):
        return Arbitrary(f.group, "even") if f.parity != "odd" else ExpPolyFunction.zero(f.group)
    return (f + f.reflect()).scale(0.5)


def odd_part(f: GroupFunction) -> GroupFunction:
    if isinstance(f, Arbitrary):
        return Arbitrary(f.group, "odd") if f.parity != "even" else ExpPolyFunction.zero(f.group)
    return (f - f.reflect()).scale(0.5)


def max_abs_difference(f: GroupFunction, g: GroupFunction, points: Iterable[Sequence[int]]) -> float:
    return max((abs(f(x) - g(x)) for x in points), default=0.0)
