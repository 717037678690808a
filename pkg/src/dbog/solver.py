"""Least-squares search for lattice solutions of the Bogomolny system.

Unknowns are the Pauli coordinates of every ``A^i_k`` and ``Phi_k``, packed
site-major: first ``extents + (3 axes, 3)`` for the connection, then
``extents + (3,)`` for the Higgs field. The residual is a quadratic
polynomial in these coordinates. It is described once, as a table of linear
and bilinear terms, from which the residual, its gradient and its sparse
Jacobian are all evaluated.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import su2
from .calculus import Cochain, shuffle_sign
from .gauge import connection, higgs
from .lattice import PERIODIC, Lattice

log = logging.getLogger(__name__)

PHI = 3  # field slot of the Higgs field; slots 0..2 are A^1..A^3
PLANES = ((0, 1), (0, 2), (1, 2))


class DivergenceError(RuntimeError):
    def __init__(self, iteration: int):
        super().__init__(f"divergence: non-finite objective at iterate {iteration}")
        self.iteration = iteration


@dataclass(frozen=True)
class Term:
    """``coef * X[sx]`` or ``coef * X[sx] @ Y[sy]``; a shift is an axis or None."""

    coef: int
    x: int
    sx: int | None
    y: int | None = None
    sy: int | None = None


def bogomolny_terms() -> dict:
    """Residual ``F^{ij} - s D_l Phi`` of each plane ``(i, j)`` as a list of terms.

    ``l`` is the axis missing from the plane and ``s`` the sign the star
    attaches to it.
    """
    table = {}
    for i, j in PLANES:
        l = 3 - i - j
        s = shuffle_sign((l,), 3)
        table[(i, j)] = [
            Term(1, j, i), Term(-1, j, None), Term(-1, i, j), Term(1, i, None),
            Term(1, i, None, j, i), Term(-1, j, None, i, j),
            Term(-s, PHI, l), Term(s, PHI, None),
            Term(-s, l, None, PHI, l), Term(s, PHI, None, l, None),
        ]
    return table


TERMS = bogomolny_terms()


def num_parameters(lattice: Lattice) -> int:
    return 12 * lattice.num_sites


def _require_3d(lattice: Lattice):
    if lattice.n != 3:
        raise ValueError("Bogomolny system is 3-dimensional")


def _fields(p, lattice: Lattice) -> np.ndarray:
    """Matrices of shape ``(4,) + extents + (2, 2)``."""
    _require_3d(lattice)
    p = np.asarray(p, dtype=float)
    if p.shape != (num_parameters(lattice),):
        raise ValueError(f"parameter vector has length {p.size}, expected {num_parameters(lattice)}")
    ns = lattice.num_sites
    a = p[: 9 * ns].reshape(lattice.extents + (3, 3))
    phi = p[9 * ns:].reshape(lattice.extents + (3,))
    coords = np.concatenate([np.moveaxis(a, -2, 0), phi[None]], axis=0)
    return su2.embed(coords)


def pack(A: Cochain, Phi: Cochain) -> np.ndarray:
    """Pauli coordinates of ``(A, Phi)`` as one flat vector."""
    return np.concatenate([su2.extract(A.values).ravel(), su2.extract(Phi.values[..., 0, :, :]).ravel()])


def unpack(p, lattice: Lattice) -> tuple[Cochain, Cochain]:
    _require_3d(lattice)
    p = np.asarray(p, dtype=float)
    if p.shape != (num_parameters(lattice),):
        raise ValueError(f"parameter vector has length {p.size}, expected {num_parameters(lattice)}")
    ns = lattice.num_sites
    return (connection(lattice, p[: 9 * ns].reshape(lattice.extents + (3, 3))),
            higgs(lattice, p[9 * ns:].reshape(lattice.extents + (3,))))


def _up(arr, axis):
    return arr if axis is None else np.roll(arr, -1, axis=axis)


def _down(arr, axis):
    return arr if axis is None else np.roll(arr, 1, axis=axis)


def valid_sites(lattice: Lattice) -> np.ndarray:
    """Sites where every residual is defined: those with a forward neighbour on each free axis."""
    ok = np.ones(lattice.extents, dtype=bool)
    for axis, b in enumerate(lattice.boundary):
        if b != PERIODIC:
            idx = [slice(None)] * lattice.n
            idx[axis] = -1
            ok[tuple(idx)] = False
    return ok


def residual(p, lattice: Lattice) -> np.ndarray:
    """Residual matrices of shape ``extents + (3 planes, 2, 2)``, zero off the valid region."""
    fields = _fields(p, lattice)
    out = np.zeros(lattice.extents + (3, 2, 2), dtype=complex)
    for c, plane in enumerate(PLANES):
        acc = np.zeros(lattice.extents + (2, 2), dtype=complex)
        for t in TERMS[plane]:
            x = _up(fields[t.x], t.sx)
            val = x if t.y is None else su2.mul(x, _up(fields[t.y], t.sy))
            acc += t.coef * val
        out[..., c, :, :] = acc
    out[~valid_sites(lattice)] = 0
    return out


def objective(p, lattice: Lattice) -> float:
    """Half the summed squared Frobenius norms of the residual."""
    return 0.5 * float(np.sum(np.abs(residual(p, lattice)) ** 2))


def gradient(p, lattice: Lattice) -> np.ndarray:
    fields = _fields(p, lattice)
    R = residual(p, lattice)
    acc = np.zeros(fields.shape, dtype=complex)
    for c, plane in enumerate(PLANES):
        r = R[..., c, :, :]
        for t in TERMS[plane]:
            if t.y is None:
                acc[t.x] += t.coef * _down(r, t.sx)
                continue
            x = _up(fields[t.x], t.sx)
            y = _up(fields[t.y], t.sy)
            acc[t.x] += t.coef * _down(su2.mul(r, su2.dagger(y)), t.sx)
            acc[t.y] += t.coef * _down(su2.mul(su2.dagger(x), r), t.sy)
    g = su2.pauli_pairing(acc)
    return np.concatenate([np.moveaxis(g[:3], 0, -2).ravel(), g[3].ravel()])


def _column_index(lattice: Lattice) -> np.ndarray:
    """Parameter index of coordinate ``c`` of field ``f`` at each site: shape ``(4,) + extents + (3,)``."""
    ns = lattice.num_sites
    site = np.arange(ns).reshape(lattice.extents)
    cols = np.empty((4,) + lattice.extents + (3,), dtype=np.int64)
    for f in range(3):
        cols[f] = (site * 9 + 3 * f)[..., None] + np.arange(3)
    cols[PHI] = (9 * ns + 3 * site)[..., None] + np.arange(3)
    return cols


def jacobian(p, lattice: Lattice) -> sp.csr_matrix:
    """Sparse Jacobian of the real residual vector (re/im interleaved, row-major in
    site, plane, matrix entry) with respect to the parameters."""
    fields = _fields(p, lattice)
    cols = _column_index(lattice)
    ok = valid_sites(lattice)
    ns = lattice.num_sites
    site_rows = np.arange(ns).reshape(lattice.extents)
    rows, colv, vals = [], [], []
    basis = su2.SU2_BASIS
    for c, plane in enumerate(PLANES):
        base = (site_rows * 3 + c) * 8
        for t in TERMS[plane]:
            pieces = []
            if t.y is None:
                d = np.broadcast_to(basis, lattice.extents + (3, 2, 2))
                pieces.append((t.x, t.sx, d))
            else:
                x = _up(fields[t.x], t.sx)[..., None, :, :]
                y = _up(fields[t.y], t.sy)[..., None, :, :]
                pieces.append((t.x, t.sx, su2.mul(basis, y)))
                pieces.append((t.y, t.sy, su2.mul(x, basis)))
            for f, shift, d in pieces:
                col = _up(cols[f], shift)[ok]  # (m, 3)
                d = t.coef * d[ok]  # (m, 3, 2, 2)
                flat = np.ascontiguousarray(d).view(float).reshape(d.shape[0], 3, 8)
                r = base[ok][:, None, None] + np.arange(8)[None, None, :]
                rows.append(np.broadcast_to(r, flat.shape).ravel())
                colv.append(np.broadcast_to(col[:, :, None], flat.shape).ravel())
                vals.append(flat.ravel())
    shape = (ns * 3 * 8, num_parameters(lattice))
    J = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(colv))), shape=shape)
    return J.tocsr()


def residual_vector(p, lattice: Lattice) -> np.ndarray:
    return np.ascontiguousarray(residual(p, lattice)).view(float).ravel()


@dataclass
class SolveReport:
    iterations: int = 0
    objective_trace: list = field(default_factory=list)
    final_objective: float = float("nan")
    final_max_residual: float = float("nan")
    termination: str = "max_iter"

    def to_json(self) -> dict:
        return {
            "iterations": self.iterations,
            "objective_trace": list(self.objective_trace),
            "final_objective": self.final_objective,
            "final_max_residual": self.final_max_residual,
            "termination": self.termination,
        }


METHODS = ("descent", "gauss_newton")


def _gauss_newton_direction(p, lattice, g, damping):
    J = jacobian(p, lattice)
    JtJ = (J.T @ J).tocsc()
    diag = JtJ.diagonal()
    scale = float(np.mean(diag)) if diag.size and np.mean(diag) > 0 else 1.0
    lhs = JtJ + damping * scale * sp.identity(JtJ.shape[0], format="csc")
    return -spla.spsolve(lhs, g)


def solve(
    initial,
    lattice: Lattice,
    max_iter: int = 10_000,
    tol_objective: float = 1e-18,
    tol_step: float = 1e-12,
    method: str = "gauss_newton",
    armijo: float = 1e-4,
    damping: float = 1e-10,
):
    """Minimise :func:`objective` from ``initial``.

    Every accepted step passes a backtracking (halving) Armijo test, so the
    objective trace is strictly decreasing. Termination is ``converged``
    once the objective is at most ``tol_objective``, ``stalled`` when the
    line search shrinks the step below ``tol_step``, and ``max_iter``
    otherwise.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    if max_iter <= 0 or tol_objective <= 0 or tol_step <= 0:
        raise ValueError("solver options must be positive")
    p = np.array(initial, dtype=float)
    f = objective(p, lattice)
    report = SolveReport(objective_trace=[f])
    if not np.isfinite(f):
        raise DivergenceError(0)
    t_init = 1.0
    while True:
        if f <= tol_objective:
            report.termination = "converged"
            break
        if report.iterations >= max_iter:
            report.termination = "max_iter"
            break
        g = gradient(p, lattice)
        if method == "gauss_newton":
            d = _gauss_newton_direction(p, lattice, g, damping)
            if not np.all(np.isfinite(d)) or g @ d >= 0:
                d = -g
            t = 1.0
        else:
            d = -g
            t = t_init
        slope = float(g @ d)
        step_norm = float(np.linalg.norm(d))
        while True:
            trial = p + t * d
            f_trial = objective(trial, lattice)
            if not np.isfinite(f_trial):
                raise DivergenceError(report.iterations + 1)
            if f_trial <= f + armijo * t * slope and f_trial < f:
                break
            t *= 0.5
            if t * step_norm < tol_step:
                trial = None
                break
        if trial is None:
            report.termination = "stalled"
            break
        p, f = trial, f_trial
        report.iterations += 1
        report.objective_trace.append(f)
        t_init = min(2.0 * t, 1e6)
        log.debug("iter %d objective %.3e step %.3e", report.iterations, f, t * step_norm)
    report.final_objective = f
    report.final_max_residual = float(np.abs(residual(p, lattice)).max())
    return p, report
