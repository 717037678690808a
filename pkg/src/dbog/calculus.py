"""Matrix-valued cochains on a cubical lattice and the operators acting on them.

A degree-``r`` cochain stores one 2x2 complex matrix per site and per
ascending ``r``-tuple of axes, in a dense array of shape
``extents + (num_components, 2, 2)``. On free axes, values that would need a
site beyond the last one are excluded through the boolean ``valid`` mask
rather than being silently set to zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .lattice import PERIODIC, Lattice
from .su2 import mul


class DegreeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Cochain:
    lattice: Lattice
    degree: int
    values: np.ndarray
    tilde: bool = False
    valid: np.ndarray = None

    def __post_init__(self):
        lat = self.lattice
        if not 0 <= self.degree <= lat.n:
            raise DegreeError(f"degree {self.degree} outside [0, {lat.n}]")
        shape = lat.extents + (len(lat.edge_sets(self.degree)), 2, 2)
        values = np.array(self.values, dtype=complex)
        if values.shape != shape:
            raise ValueError(f"values have shape {values.shape}, expected {shape}")
        valid = True if self.valid is None else self.valid
        valid = np.array(np.broadcast_to(np.asarray(valid, dtype=bool), shape[:-2]))
        values.flags.writeable = False
        valid.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "valid", valid)

    @classmethod
    def zeros(cls, lattice: Lattice, degree: int, tilde: bool = False) -> "Cochain":
        return cls(lattice, degree, _blank(lattice, degree)[0], tilde)

    @classmethod
    def from_components(cls, lattice: Lattice, degree: int, components: dict, tilde: bool = False) -> "Cochain":
        """Build from ``{J: array of shape extents + (2, 2)}``; missing J are zero."""
        out = _blank(lattice, degree)[0]
        for J, arr in components.items():
            out[..., lattice.component_index(J), :, :] = arr
        return cls(lattice, degree, out, tilde)

    @property
    def edge_sets(self):
        return self.lattice.edge_sets(self.degree)

    def component(self, J) -> np.ndarray:
        return self.values[..., self.lattice.component_index(J), :, :]

    def component_valid(self, J) -> np.ndarray:
        return self.valid[..., self.lattice.component_index(J)]

    def __getitem__(self, key):
        k, J = key
        return self.values[tuple(k) + (self.lattice.component_index(J),)]

    def _same_space(self, other: "Cochain"):
        if (
            self.lattice != other.lattice
            or self.degree != other.degree
            or self.tilde != other.tilde
        ):
            raise ValueError("cochains live in different spaces")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._same_space(other)
        return Cochain(self.lattice, self.degree, self.values + other.values, self.tilde,
                       self.valid & other.valid)

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._same_space(other)
        return Cochain(self.lattice, self.degree, self.values - other.values, self.tilde,
                       self.valid & other.valid)

    def __neg__(self) -> "Cochain":
        return Cochain(self.lattice, self.degree, -self.values, self.tilde, self.valid)

    def __rmul__(self, alpha) -> "Cochain":
        return Cochain(self.lattice, self.degree, alpha * self.values, self.tilde, self.valid)

    def max_abs(self) -> float:
        """Largest entry modulus over the valid region."""
        v = np.abs(self.values)[self.valid]
        return float(v.max()) if v.size else 0.0

    def equals(self, other: "Cochain") -> bool:
        """Exact equality on the common valid region."""
        self._same_space(other)
        return bool(np.all((self.values == other.values)[self.valid & other.valid]))


def _blank(lattice: Lattice, degree: int):
    """Writable zero values and an all-true mask for a degree-``degree`` cochain."""
    if not 0 <= degree <= lattice.n:
        raise DegreeError(f"degree {degree} outside [0, {lattice.n}]")
    ncomp = len(lattice.edge_sets(degree))
    return (np.zeros(lattice.extents + (ncomp, 2, 2), dtype=complex),
            np.ones(lattice.extents + (ncomp,), dtype=bool))


def _shift(lattice: Lattice, values: np.ndarray, valid: np.ndarray, axis: int):
    """Values and validity at ``tau_axis k``, indexed by ``k``."""
    values = np.roll(values, -1, axis=axis)
    valid = np.roll(valid, -1, axis=axis)
    if lattice.boundary[axis] != PERIODIC:
        last = [slice(None)] * lattice.n
        last[axis] = -1
        values[tuple(last)] = 0
        valid = valid.copy()
        valid[tuple(last)] = False
    return values, valid


def shift_cochain(phi: Cochain, axis: int, steps: int = 1) -> Cochain:
    """The cochain whose value at ``k`` is ``phi`` at ``tau_axis^steps k``."""
    values, valid = phi.values, phi.valid
    for _ in range(steps):
        values, valid = _shift(phi.lattice, values, valid, axis)
    return Cochain(phi.lattice, phi.degree, values, phi.tilde, valid)


def delta(phi: Cochain, axis: int, k=None):
    """Forward difference ``phi_{tau_axis k} - phi_k``, on every component.

    With ``k`` given, returns the matrix at that site (raising if the shift
    leaves a free lattice); otherwise the whole differenced cochain.
    """
    shifted = shift_cochain(phi, axis)
    out = Cochain(phi.lattice, phi.degree, shifted.values - phi.values, phi.tilde,
                  shifted.valid & phi.valid)
    if k is None:
        return out
    k = tuple(k)
    if not out.valid[k].all():
        raise IndexError(f"site {k} has no forward neighbour along axis {axis}")
    return out.values[k][0] if phi.degree == 0 else out.values[k]


def coboundary(phi: Cochain) -> Cochain:
    """Coboundary ``d^c``: on ``J = (j_0 < ... < j_r)``,
    ``(d^c phi)^J = sum_m (-1)^m Delta_{j_m} phi^{J - j_m}``."""
    lat, r = phi.lattice, phi.degree
    if r >= lat.n:
        raise DegreeError("top-degree cochain has zero coboundary")
    values, valid = _blank(lat, r + 1)
    for c, J in enumerate(lat.edge_sets(r + 1)):
        acc = np.zeros(lat.extents + (2, 2), dtype=complex)
        ok = np.ones(lat.extents, dtype=bool)
        for m, j in enumerate(J):
            f = lat.component_index(J[:m] + J[m + 1:])
            here = phi.values[..., f, :, :]
            there, there_ok = _shift(lat, here, phi.valid[..., f], j)
            diff = there - here
            acc = acc - diff if m % 2 else acc + diff
            ok &= there_ok & phi.valid[..., f]
        values[..., c, :, :] = acc
        valid[..., c] = ok
    return Cochain(lat, r + 1, values, phi.tilde, valid)


def koszul_sign(J_left, J_right) -> int:
    """(-1) to the number of pairs a in ``J_right``, b in ``J_left`` with a < b."""
    count = sum(1 for a in J_right for b in J_left if a < b)
    return -1 if count % 2 else 1


def cup(phi: Cochain, psi: Cochain) -> Cochain:
    """Cup product; coefficients multiply as matrices, ``phi`` on the left.

    On ``J``, sums over splits ``J = J_phi + J_psi`` with
    ``koszul_sign(J_phi, J_psi) * phi^{J_phi}_k psi^{J_psi}_{k'}`` where ``k'``
    is ``k`` moved one step along every axis of ``J_phi``.
    """
    lat = phi.lattice
    if lat != psi.lattice or phi.tilde != psi.tilde:
        raise ValueError("cochains live on different complexes")
    r, p = phi.degree, psi.degree
    if r + p > lat.n:
        raise DegreeError(f"cup of degrees {r} and {p} exceeds dimension {lat.n}")
    values, valid = _blank(lat, r + p)
    for c, J in enumerate(lat.edge_sets(r + p)):
        acc = np.zeros(lat.extents + (2, 2), dtype=complex)
        ok = np.ones(lat.extents, dtype=bool)
        for J_phi in combinations(J, r):
            J_psi = tuple(j for j in J if j not in J_phi)
            a = lat.component_index(J_phi)
            b = lat.component_index(J_psi)
            right, right_ok = psi.values[..., b, :, :], psi.valid[..., b]
            for j in J_phi:
                right, right_ok = _shift(lat, right, right_ok, j)
            term = mul(phi.values[..., a, :, :], right)
            acc = acc + term if koszul_sign(J_phi, J_psi) > 0 else acc - term
            ok &= phi.valid[..., a] & right_ok
        values[..., c, :, :] = acc
        valid[..., c] = ok
    return Cochain(lat, r + p, values, phi.tilde, valid)


def shuffle_sign(J, n: int) -> int:
    """Parity of the permutation listing ``J`` first, then the remaining axes, both ascending."""
    order = list(J) + [i for i in range(n) if i not in J]
    inversions = sum(1 for x in range(n) for y in range(x + 1, n) if order[x] > order[y])
    return -1 if inversions % 2 else 1


def complement(J, n: int) -> tuple[int, ...]:
    return tuple(i for i in range(n) if i not in J)


def star(phi: Cochain) -> Cochain:
    """Hodge star onto the other copy of the double complex.

    The value on ``J`` moves to the complement of ``J`` at the same site,
    multiplied by ``shuffle_sign(J)``.
    """
    lat, r = phi.lattice, phi.degree
    values, valid = _blank(lat, lat.n - r)
    for a, J in enumerate(lat.edge_sets(r)):
        c = lat.component_index(complement(J, lat.n))
        comp = phi.values[..., a, :, :]
        values[..., c, :, :] = comp if shuffle_sign(J, lat.n) > 0 else -comp
        valid[..., c] = phi.valid[..., a]
    return Cochain(lat, lat.n - r, values, not phi.tilde, valid)


def tilde_swap(phi: Cochain) -> Cochain:
    """Identify a cochain with the one carrying the same components in the other copy."""
    return Cochain(phi.lattice, phi.degree, phi.values, not phi.tilde, phi.valid)
