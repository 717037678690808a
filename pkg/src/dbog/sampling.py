"""Seeded random fields, cochains and chains.

All randomness goes through numpy's PCG64 bit generator, whose output
stream for a given seed is fixed across platforms.
"""

import numpy as np

from . import su2
from .calculus import Cochain
from .gauge import connection, higgs
from .lattice import Chain, Lattice


def make_rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def uniform_coords(rng, shape, amplitude=1.0):
    """Pauli coordinates drawn uniformly from [-amplitude, amplitude)."""
    return amplitude * (2.0 * rng.random(tuple(shape) + (3,)) - 1.0)


def integer_coords(rng, shape, bound=3):
    return rng.integers(-bound, bound + 1, size=tuple(shape) + (3,)).astype(float)


def random_connection(lattice: Lattice, rng, amplitude=1.0, integer=False) -> Cochain:
    shape = lattice.extents + (lattice.n,)
    coords = integer_coords(rng, shape) if integer else uniform_coords(rng, shape, amplitude)
    return connection(lattice, coords)


def random_higgs(lattice: Lattice, rng, amplitude=1.0, integer=False) -> Cochain:
    shape = lattice.extents
    coords = integer_coords(rng, shape) if integer else uniform_coords(rng, shape, amplitude)
    return higgs(lattice, coords)


ABELIAN_KINDS = ("constant", "axial", "single_axis", "general")


def abelian_connection(lattice: Lattice, rng, kind="axial", generator=2) -> Cochain:
    """Connection whose every component is a real multiple of one su(2) basis element.

    ``constant``: the same coefficient at every site. ``axial``: the
    coefficient of ``A^i`` depends on ``k_i`` only. ``single_axis``: only one
    axis carries a (site-dependent) component. ``general``: independent
    coefficients everywhere. For the first three the products in ``A cup A``
    cancel and the curvature stays in su(2); for ``general`` they leave a
    multiple of the identity.
    """
    n = lattice.n
    shape = lattice.extents + (n,)
    if kind == "constant":
        coeff = np.broadcast_to(2.0 * rng.random(n) - 1.0, shape)
    elif kind == "axial":
        coeff = np.empty(shape)
        for i, size in enumerate(lattice.extents):
            f = 2.0 * rng.random(size) - 1.0
            view = [None] * n
            view[i] = slice(None)
            coeff[..., i] = np.broadcast_to(f[tuple(view)], lattice.extents)
    elif kind == "single_axis":
        coeff = np.zeros(shape)
        coeff[..., int(rng.integers(0, n))] = 2.0 * rng.random(lattice.extents) - 1.0
    elif kind == "general":
        coeff = 2.0 * rng.random(shape) - 1.0
    else:
        raise ValueError(f"unknown abelian family {kind!r}")
    return Cochain(lattice, 1, coeff[..., None, None] * su2.SU2_BASIS[generator])


def random_cochain(lattice: Lattice, degree: int, rng, integer=True, bound=3, tilde=False) -> Cochain:
    """gl(2, C)-valued cochain; Gaussian-integer entries when ``integer``."""
    shape = lattice.extents + (len(lattice.edge_sets(degree)), 2, 2)
    if integer:
        re = rng.integers(-bound, bound + 1, size=shape)
        im = rng.integers(-bound, bound + 1, size=shape)
    else:
        re = 2.0 * rng.random(shape) - 1.0
        im = 2.0 * rng.random(shape) - 1.0
    return Cochain(lattice, degree, re + 1j * im, tilde)


def random_chain(lattice: Lattice, degree: int, rng, terms=6, bound=5) -> Chain:
    """Chain with up to ``terms`` basis cells and nonzero integer coefficients."""
    cells = lattice.edge_sets(degree)
    out = {}
    for _ in range(terms):
        k = tuple(int(rng.integers(0, n)) for n in lattice.extents)
        J = cells[int(rng.integers(0, len(cells)))]
        c = int(rng.integers(1, bound + 1)) * (1 if rng.random() < 0.5 else -1)
        out[(k, J)] = out.get((k, J), 0) + c
    return Chain(lattice, out)
