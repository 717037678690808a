"""Cubical lattices, basis cells, chains, the boundary map and the pairing.

Axes are numbered from 0 in code. A basis cell is a site ``k`` together
with the ascending tuple ``J`` of axes along which it extends; ``len(J)``
is its dimension.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, NamedTuple

import numpy as np

PERIODIC = "periodic"
FREE = "free"


@dataclass(frozen=True)
class Lattice:
    """A finite box of sites, periodic or free along each axis."""

    extents: tuple[int, ...]
    boundary: tuple[str, ...] = None

    def __post_init__(self):
        extents = tuple(int(e) for e in self.extents)
        if not extents:
            raise ValueError("lattice needs at least one axis")
        boundary = self.boundary
        if boundary is None:
            boundary = (PERIODIC,) * len(extents)
        elif isinstance(boundary, str):
            boundary = (boundary,) * len(extents)
        boundary = tuple(boundary)
        if len(boundary) != len(extents):
            raise ValueError("one boundary flag per axis is required")
        for n, b in zip(extents, boundary):
            if b not in (PERIODIC, FREE):
                raise ValueError(f"unknown boundary {b!r}")
            if n < 1 or (b == PERIODIC and n < 2):
                raise ValueError(f"extent {n} too small for a {b} axis")
        object.__setattr__(self, "extents", extents)
        object.__setattr__(self, "boundary", boundary)

    @classmethod
    def cube(cls, size: int, n: int, boundary: str = PERIODIC) -> "Lattice":
        return cls((size,) * n, boundary)

    @property
    def n(self) -> int:
        return len(self.extents)

    @property
    def num_sites(self) -> int:
        return int(np.prod(self.extents))

    @property
    def periodic(self) -> bool:
        return all(b == PERIODIC for b in self.boundary)

    def edge_sets(self, r: int) -> list[tuple[int, ...]]:
        return self._edge_sets[r]

    @cached_property
    def _edge_sets(self):
        return [list(combinations(range(self.n), r)) for r in range(self.n + 1)]

    def component_index(self, J: Iterable[int]) -> int:
        J = tuple(J)
        return self.edge_sets(len(J)).index(J)

    def sites(self):
        """All sites in row-major order."""
        return np.ndindex(*self.extents)

    def shift(self, k, axis: int, steps: int = 1) -> tuple[int, ...]:
        """Move ``k`` by ``steps`` along ``axis``; wraps on periodic axes only."""
        k = list(k)
        k[axis] += steps
        if self.boundary[axis] == PERIODIC:
            k[axis] %= self.extents[axis]
        return tuple(k)

    def in_range(self, k) -> bool:
        return all(0 <= ki < n for ki, n in zip(k, self.extents))

    def normalize(self, k) -> tuple[int, ...]:
        return tuple(
            ki % n if b == PERIODIC else ki
            for ki, n, b in zip(k, self.extents, self.boundary)
        )

    def to_json(self) -> dict:
        return {"n": self.n, "extents": list(self.extents), "boundary": list(self.boundary)}

    @classmethod
    def from_json(cls, data: Mapping) -> "Lattice":
        extents = data["extents"]
        if "n" in data and data["n"] != len(extents):
            raise ValueError("'n' does not match the number of extents")
        return cls(tuple(extents), tuple(data.get("boundary", [PERIODIC] * len(extents))))

    def __str__(self):
        dims = "x".join(str(e) for e in self.extents)
        return dims if self.periodic else f"{dims}({','.join(self.boundary)})"


class BasisElement(NamedTuple):
    k: tuple[int, ...]
    J: tuple[int, ...]
    tilde: bool = False

    @property
    def degree(self) -> int:
        return len(self.J)


@dataclass(frozen=True)
class Chain:
    """Finite real combination of basis cells of one lattice.

    ``terms`` maps ``(k, J)`` to a coefficient. Zero coefficients are
    dropped and sites are wrapped on periodic axes. Chains of the doubled
    complex are only obtained through :meth:`as_tilde`.
    """

    lattice: Lattice
    terms: Mapping = field(default_factory=dict)
    tilde: bool = field(default=False, kw_only=True, repr=False)

    def __post_init__(self):
        clean = {}
        for key, coeff in dict(self.terms).items():
            k, J = tuple(key[0]), tuple(key[1])
            if list(J) != sorted(set(J)) or any(not 0 <= j < self.lattice.n for j in J):
                raise ValueError(f"bad edge set {J!r}")
            if len(k) != self.lattice.n:
                raise ValueError(f"site {k!r} has the wrong dimension")
            elem = BasisElement(self.lattice.normalize(k), J, self.tilde)
            clean[elem] = clean.get(elem, 0) + coeff
        object.__setattr__(self, "terms", {e: c for e, c in clean.items() if c != 0})

    @classmethod
    def basis(cls, lattice: Lattice, k, J) -> "Chain":
        return cls(lattice, {(tuple(k), tuple(J)): 1})

    def __add__(self, other: "Chain") -> "Chain":
        if self.lattice != other.lattice or self.tilde != other.tilde:
            raise ValueError("chains live on different complexes")
        terms = self._keyed()
        for key, c in other._keyed().items():
            terms[key] = terms.get(key, 0) + c
        return Chain(self.lattice, terms, tilde=self.tilde)

    def __rmul__(self, alpha) -> "Chain":
        return Chain(self.lattice, {key: alpha * c for key, c in self._keyed().items()}, tilde=self.tilde)

    def __neg__(self) -> "Chain":
        return (-1) * self

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __len__(self):
        return len(self.terms)

    def _keyed(self) -> dict:
        return {(e.k, e.J): c for e, c in self.terms.items()}

    def as_tilde(self) -> "Chain":
        """The same combination of cells, read in the other copy of the double complex."""
        return Chain(self.lattice, self._keyed(), tilde=not self.tilde)


def boundary(c: Chain) -> Chain:
    """Boundary map, extended to products of 1-dimensional cells with graded signs.

    The cell ``(k, J)`` with ``J = (j_0 < ... < j_{r-1})`` goes to
    ``sum_m (-1)^m [(tau_{j_m} k, J - j_m) - (k, J - j_m)]``. Faces that fall
    off a free axis are kept with their out-of-range site.
    """
    lat = c.lattice
    out: dict = {}
    for elem, coeff in c.terms.items():
        for m, j in enumerate(elem.J):
            face = elem.J[:m] + elem.J[m + 1:]
            sign = -coeff if m % 2 else coeff
            for k, s in ((lat.shift(elem.k, j), sign), (elem.k, -sign)):
                out[(k, face)] = out.get((k, face), 0) + s
    return Chain(lat, out, tilde=c.tilde)


def pairing(c: Chain, phi) -> np.ndarray:
    """``<c, phi>``: sum of chain coefficients times the matching cochain values.

    Cells of the wrong degree pair to zero, as do cells whose site is off the
    lattice (cochains vanish outside it).
    """
    if c.lattice != phi.lattice:
        raise ValueError("chain and cochain live on different lattices")
    if c.tilde != phi.tilde:
        raise ValueError("chain and cochain belong to different complexes of the double")
    total = np.zeros((2, 2), dtype=np.result_type(phi.values, float))
    for elem, coeff in c.terms.items():
        if elem.degree != phi.degree or not c.lattice.in_range(elem.k):
            continue
        total = total + coeff * phi.values[elem.k + (c.lattice.component_index(elem.J),)]
    return total
