"""Connections, Higgs fields, curvature and the Bogomolny / self-dual residuals.

Each residual is available twice: through the generic cochain operators
(``curvature``, ``covariant_differential``, ``bogomolny_residual``,
``selfdual_residual``) and through hand-written component formulas
(the ``*_components`` functions). The latter use their own shifting and
matrix products so the two routes can check each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import su2
from .calculus import Cochain, DegreeError, coboundary, cup, shuffle_sign, star, tilde_swap
from .lattice import PERIODIC, Lattice


class DimensionError(ValueError):
    pass


def connection(lattice: Lattice, coords) -> Cochain:
    """su(2)-valued 1-cochain from Pauli coordinates of shape ``extents + (n, 3)``."""
    return Cochain(lattice, 1, su2.embed(coords))


def higgs(lattice: Lattice, coords) -> Cochain:
    """su(2)-valued 0-cochain from Pauli coordinates of shape ``extents + (3,)``."""
    return Cochain(lattice, 0, su2.embed(np.asarray(coords)[..., None, :]))


def su2_defect(phi: Cochain) -> float:
    """Largest Frobenius distance of a component from su(2), over the valid region."""
    d = su2.su2_defect(phi.values)[phi.valid]
    return float(d.max()) if d.size else 0.0


def reproject(phi: Cochain) -> Cochain:
    """Snap every component back onto su(2)."""
    return Cochain(phi.lattice, phi.degree, su2.project_su2(phi.values), phi.tilde, phi.valid)


def _check_connection(A: Cochain):
    if A.degree != 1 or A.tilde:
        raise DegreeError("a connection is a 1-cochain of the primary complex")


def _check_higgs(A: Cochain, Phi: Cochain):
    if Phi.degree != 0 or Phi.tilde:
        raise DegreeError("a Higgs field is a 0-cochain of the primary complex")
    if Phi.lattice != A.lattice:
        raise ValueError("connection and Higgs field live on different lattices")


def curvature(A: Cochain) -> Cochain:
    """``F = d^c A + A cup A``. Components are left in gl(2, C)."""
    _check_connection(A)
    return coboundary(A) + cup(A, A)


def covariant_differential(A: Cochain, phi: Cochain) -> Cochain:
    """``d^c phi + A cup phi + (-1)^(r+1) phi cup A`` for a degree-``r`` cochain."""
    _check_connection(A)
    twist = cup(A, phi)
    twist = twist - cup(phi, A) if phi.degree % 2 == 0 else twist + cup(phi, A)
    return coboundary(phi) + twist


@dataclass(frozen=True, eq=False)
class BogomolnyResidual:
    """``F - iota star d_A Phi`` on a 3-dimensional lattice."""

    residual: Cochain

    @property
    def total(self) -> float:
        """Sum of squared Frobenius norms over all sites and planes."""
        return float(np.sum(self.plane_norms_squared()))

    def plane_norms_squared(self) -> np.ndarray:
        sq = np.sum(np.abs(self.residual.values) ** 2, axis=(-2, -1))
        return np.where(self.residual.valid, sq, 0.0).reshape(-1, sq.shape[-1]).sum(axis=0)

    def plane_norms(self) -> dict[str, float]:
        return {
            plane_label(J): float(np.sqrt(s))
            for J, s in zip(self.residual.edge_sets, self.plane_norms_squared())
        }

    def max_abs(self) -> float:
        return self.residual.max_abs()


def bogomolny_residual(A: Cochain, Phi: Cochain) -> BogomolnyResidual:
    _check_connection(A)
    _check_higgs(A, Phi)
    if A.lattice.n != 3:
        raise DimensionError("Bogomolny system is 3-dimensional")
    return BogomolnyResidual(curvature(A) - tilde_swap(star(covariant_differential(A, Phi))))


def selfdual_residual(A: Cochain) -> Cochain:
    """``F - iota star F`` on a 4-dimensional lattice (all six planes)."""
    _check_connection(A)
    if A.lattice.n != 4:
        raise DimensionError("self-dual system is 4-dimensional")
    F = curvature(A)
    return F - tilde_swap(star(F))


def lift_to_4d(A: Cochain, Phi: Cochain, n4: int = 2) -> Cochain:
    """4D connection whose fourth component is ``Phi``, constant along the new axis."""
    _check_connection(A)
    _check_higgs(A, Phi)
    lat = A.lattice
    if lat.n != 3:
        raise DimensionError("only 3-dimensional configurations can be lifted")
    lat4 = Lattice(lat.extents + (n4,), lat.boundary + (PERIODIC,))
    comps = np.concatenate([A.values, Phi.values], axis=-3)
    valid = np.concatenate([A.valid, Phi.valid], axis=-1)
    comps = np.repeat(comps[:, :, :, None], n4, axis=3)
    valid = np.repeat(valid[:, :, :, None], n4, axis=3)
    return Cochain(lat4, 1, comps, valid=valid)


@dataclass(frozen=True)
class ReductionReport:
    max_discrepancy: float
    bogomolny_total: float
    selfdual_total: float
    n4: int
    correspondence: dict


def reduction_correspondence() -> dict:
    """Map each plane of the 3D system to the 4D plane and sign that reproduces it.

    The 4D residual on a plane ``J`` inside the first three axes is
    ``F_J - s4 F_{J'}`` with ``J'`` its 4D complement, which contains the
    lifted axis, so ``F_{J'}`` is a covariant derivative of ``Phi``. The 3D
    residual on ``J`` is ``F_J - s3 D Phi`` on the 3D complement. The two
    agree with the relative sign ``s4 * s3``.
    """
    out = {}
    for J in Lattice((2, 2, 2)).edge_sets(2):
        s3 = shuffle_sign(J, 3)
        s4 = shuffle_sign(J, 4)
        out[J] = (J, s3 * s4)
    return out


def equivalence_check(A: Cochain, Phi: Cochain, n4: int = 2) -> ReductionReport:
    """Compare the Bogomolny residual with the self-dual residual of the lift.

    Returns the largest entrywise discrepancy over all planes, sites and
    slices along the lifted axis.
    """
    bog = bogomolny_residual(A, Phi)
    A4 = lift_to_4d(A, Phi, n4)
    sd = selfdual_residual(A4)
    corr = reduction_correspondence()
    worst = 0.0
    for J, (J4, sign) in corr.items():
        r3 = bog.residual.component(J)[:, :, :, None]
        r4 = sd.component(J4)
        ok = bog.residual.component_valid(J)[:, :, :, None] & sd.component_valid(J4)
        diff = np.abs(r4 - sign * r3).max(axis=(-2, -1))
        diff = diff[ok]
        if diff.size:
            worst = max(worst, float(diff.max()))
    sq = np.sum(np.abs(sd.values) ** 2, axis=(-2, -1))
    return ReductionReport(
        max_discrepancy=worst,
        bogomolny_total=bog.total,
        selfdual_total=float(np.sum(sq[sd.valid])),
        n4=n4,
        correspondence={plane_label(J): (plane_label(J4), s) for J, (J4, s) in corr.items()},
    )


def plane_label(J) -> str:
    return "".join(str(j + 1) for j in J)


# Hand-written component formulas. Shifts use np.roll, so on free lattices
# only the sites whose neighbours exist are meaningful.

def _up(arr, axis):
    return np.roll(arr, -1, axis=axis)


def _mm(a, b):
    return np.einsum("...ij,...jk->...ik", a, b)


def curvature_components(A: Cochain) -> dict:
    """``F^{ij}_k = D_i A^j - D_j A^i + A^i_k A^j_{tau_i k} - A^j_k A^i_{tau_j k}``."""
    lat = A.lattice
    a = [A.values[..., i, :, :] for i in range(lat.n)]
    out = {}
    for i, j in lat.edge_sets(2):
        diff = (_up(a[j], i) - a[j]) - (_up(a[i], j) - a[i])
        prod = _mm(a[i], _up(a[j], i)) - _mm(a[j], _up(a[i], j))
        out[(i, j)] = diff + prod
    return out


def covariant_components(A: Cochain, Phi: Cochain) -> dict:
    """``D_i Phi_k + A^i_k Phi_{tau_i k} - Phi_k A^i_k`` for each axis ``i``."""
    lat = A.lattice
    phi = Phi.values[..., 0, :, :]
    out = {}
    for i in range(lat.n):
        a = A.values[..., i, :, :]
        out[i] = (_up(phi, i) - phi) + (_mm(a, _up(phi, i)) - _mm(phi, a))
    return out


def bogomolny_components(A: Cochain, Phi: Cochain) -> dict:
    """The three difference equations written out plane by plane, as residuals."""
    if A.lattice.n != 3:
        raise DimensionError("Bogomolny system is 3-dimensional")
    F = curvature_components(A)
    D = covariant_components(A, Phi)
    return {
        (0, 1): F[(0, 1)] - D[2],
        (0, 2): F[(0, 2)] + D[1],
        (1, 2): F[(1, 2)] - D[0],
    }


def selfdual_components(A: Cochain) -> dict:
    """``F12 - F34``, ``F13 + F24``, ``F14 - F23``, keyed by the first plane."""
    if A.lattice.n != 4:
        raise DimensionError("self-dual system is 4-dimensional")
    F = curvature_components(A)
    return {
        (0, 1): F[(0, 1)] - F[(2, 3)],
        (0, 2): F[(0, 2)] + F[(1, 3)],
        (0, 3): F[(0, 3)] - F[(1, 2)],
    }
