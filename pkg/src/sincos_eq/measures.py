"""Finitely supported complex measures on a group."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .functions import Exponential, GroupFunction
from .groups import Element, GroupSpec, add, neg, sub
from .jsonio import ConfigError, dump_complex, parse_complex


@dataclass(frozen=True, eq=False)
class Measure:
    """Sum of weighted Dirac masses; points are canonical and pairwise distinct."""

    group: GroupSpec
    atoms: Mapping[Element, complex] = field(default_factory=dict)

    def __post_init__(self) -> None:
        merged: dict[Element, complex] = {}
        for p, w in self.atoms.items():
            p = self.group.element(p)
            merged[p] = merged.get(p, 0j) + complex(w)
        object.__setattr__(self, "atoms", dict(sorted(merged.items())))

    @classmethod
    def from_atoms(cls, group: GroupSpec, atoms: Iterable[tuple[Sequence[int], complex]]) -> Measure:
        merged: dict[Element, complex] = {}
        for p, w in atoms:
            p = group.element(p)
            merged[p] = merged.get(p, 0j) + complex(w)
        return cls(group, merged)

    @classmethod
    def dirac(cls, group: GroupSpec, point: Sequence[int] | int | None = None, weight: complex = 1) -> Measure:
        p = group.zero if point is None else group.element(point)
        return cls(group, {p: weight})

    def pruned(self, tol: float = 0.0) -> Measure:
        return Measure(self.group, {p: w for p, w in self.atoms.items() if abs(w) > tol})

    @property
    def total_mass(self) -> complex:
        return sum(self.atoms.values(), 0j)

    def __add__(self, other: Measure) -> Measure:
        return Measure.from_atoms(self.group, list(self.atoms.items()) + list(other.atoms.items()))

    def __mul__(self, c: complex) -> Measure:
        return Measure(self.group, {p: c * w for p, w in self.atoms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Measure):
            return NotImplemented
        a, b = self.pruned(), other.pruned()
        return a.group == b.group and a.atoms == b.atoms

    def to_json(self) -> dict:
        return {"atoms": [{"point": list(p), "weight": dump_complex(w)} for p, w in self.atoms.items()]}

    @classmethod
    def from_json(cls, group: GroupSpec, data: Mapping, field: str = "measure") -> Measure:
        atoms = data.get("atoms") if isinstance(data, Mapping) else None
        if not isinstance(atoms, list):
            raise ConfigError(f"{field}.atoms: expected a list of {{point, weight}}")
        parsed = []
        for i, a in enumerate(atoms):
            f = f"{field}.atoms[{i}]"
            if not isinstance(a, Mapping) or "point" not in a:
                raise ConfigError(f"{f}: expected {{point, weight}}")
            point = a["point"]
            if isinstance(point, int):
                point = [point]
            if not isinstance(point, list) or len(point) != group.dim:
                raise ConfigError(f"{f}.point: expected {group.dim} integers for {group}")
            parsed.append((point, parse_complex(a.get("weight", 1), f + ".weight")))
        return cls.from_atoms(group, parsed)


def convolve(f: GroupFunction, mu: Measure, x: Sequence[int]) -> complex:
    """(f * mu)(x) = sum_t f(x - t) mu({t})."""
    return sum((f(sub(mu.group, x, t)) * w for t, w in mu.atoms.items()), 0j)


def mu_hat(mu: Measure, m: Exponential) -> complex:
    """Fourier-Stieltjes transform: integral of m(-t) d mu(t)."""
    return sum((m(neg(mu.group, t)) * w for t, w in mu.atoms.items()), 0j)


def translate(mu: Measure, y: Sequence[int]) -> Measure:
    return Measure(mu.group, {add(mu.group, t, y): w for t, w in mu.atoms.items()})


def invert(mu: Measure) -> Measure:
    return Measure(mu.group, {neg(mu.group, t): w for t, w in mu.atoms.items()})


class Convolved(GroupFunction):
    """The function f * mu, evaluated lazily."""

    def __init__(self, f: GroupFunction, mu: Measure):
        self.group = f.group
        self.f = f
        self.mu = mu

    def __call__(self, x: Sequence[int]) -> complex:
        return convolve(self.f, self.mu, x)

    def reflect(self) -> Convolved:
        return Convolved(self.f.reflect(), invert(self.mu))
