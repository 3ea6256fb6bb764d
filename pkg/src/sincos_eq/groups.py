"""Finitely generated abelian groups Z^r + Z_n1 + ... + Z_nk.

Elements are plain tuples of ints. The first ``free_rank`` coordinates are
unbounded, the remaining ones are torsion coordinates kept in ``[0, n_j)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

Element = tuple[int, ...]
CosetIndex = tuple[int, ...]


class DimensionError(ValueError):
    """An element does not have the dimension of its group."""


class UnsupportedDomainError(ValueError):
    """The requested operation needs a finite group."""


@dataclass(frozen=True)
class GroupSpec:
    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ValueError(f"free_rank must be non-negative, got {self.free_rank}")
        object.__setattr__(self, "torsion", tuple(int(n) for n in self.torsion))
        for n in self.torsion:
            if n < 1:
                raise ValueError(f"torsion orders must be >= 1, got {n}")

    @classmethod
    def cyclic(cls, n: int) -> GroupSpec:
        return cls(0, (n,))

    @classmethod
    def integers(cls, rank: int = 1) -> GroupSpec:
        return cls(rank, ())

    @property
    def dim(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise UnsupportedDomainError(f"{self} is infinite")
        return prod(self.torsion)

    @property
    def zero(self) -> Element:
        return (0,) * self.dim

    @property
    def n_coset_bits(self) -> int:
        return self.free_rank + sum(1 for n in self.torsion if n % 2 == 0)

    def element(self, coords: Iterable[int] | int) -> Element:
        """Canonical element from raw integer coordinates."""
        if isinstance(coords, int):
            coords = (coords,)
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.dim:
            raise DimensionError(
                f"element {coords} has dimension {len(coords)}, group {self} needs {self.dim}"
            )
        r = self.free_rank
        return coords[:r] + tuple(c % n for c, n in zip(coords[r:], self.torsion))

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data: dict) -> GroupSpec:
        return cls(int(data.get("free_rank", 0)), tuple(data.get("torsion", ())))

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z{n}" for n in self.torsion]
        return " + ".join(parts) if parts else "0"


def _check(g: GroupSpec, x: Sequence[int]) -> None:
    if len(x) != g.dim:
        raise DimensionError(f"element {tuple(x)} does not conform to {g}")


def add(g: GroupSpec, x: Sequence[int], y: Sequence[int]) -> Element:
    _check(g, x)
    _check(g, y)
    return g.element(a + b for a, b in zip(x, y))


def neg(g: GroupSpec, x: Sequence[int]) -> Element:
    _check(g, x)
    return g.element(-a for a in x)


def sub(g: GroupSpec, x: Sequence[int], y: Sequence[int]) -> Element:
    _check(g, x)
    _check(g, y)
    return g.element(a - b for a, b in zip(x, y))


def double(g: GroupSpec, x: Sequence[int]) -> Element:
    return add(g, x, x)


def enumerate_elements(g: GroupSpec) -> list[Element]:
    """All elements of a finite group in lexicographic order."""
    if not g.is_finite:
        raise UnsupportedDomainError(f"cannot enumerate the infinite group {g}")
    return [tuple(c) for c in itertools.product(*(range(n) for n in g.torsion))]


def coset_2g(g: GroupSpec, x: Sequence[int]) -> CosetIndex:
    """Index of the coset ``x + 2G``.

    One parity bit per free coordinate and per even torsion order; odd
    torsion orders are 2-divisible and contribute nothing.
    """
    _check(g, x)
    x = g.element(x)
    r = g.free_rank
    bits = [c % 2 for c in x[:r]]
    bits += [c % 2 for c, n in zip(x[r:], g.torsion) if n % 2 == 0]
    return tuple(bits)


def all_cosets_2g(g: GroupSpec) -> list[CosetIndex]:
    return [tuple(b) for b in itertools.product((0, 1), repeat=g.n_coset_bits)]


def window(g: GroupSpec, half_width: int) -> list[Element]:
    """Finite evaluation set: full group if finite, else the box [-W, W] on free coordinates."""
    free = [range(-half_width, half_width + 1)] * g.free_rank
    tors = [range(n) for n in g.torsion]
    return [tuple(c) for c in itertools.product(*free, *tors)]
