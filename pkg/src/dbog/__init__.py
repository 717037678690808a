"""Matrix-valued discrete exterior calculus on cubical lattices and the
discrete Bogomolny / self-dual Yang-Mills systems built on it."""

import os

# DBOG_THREADS caps BLAS threads; it only takes effect if set before numpy loads.
if os.environ.get("DBOG_THREADS"):
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_var, os.environ["DBOG_THREADS"])

from .calculus import Cochain, coboundary, cup, delta, star, tilde_swap  # noqa: E402
from .gauge import (  # noqa: E402
    bogomolny_residual, covariant_differential, curvature, equivalence_check,
    lift_to_4d, selfdual_residual,
)
from .lattice import Chain, Lattice, boundary, pairing  # noqa: E402

__all__ = [
    "Chain", "Cochain", "Lattice", "bogomolny_residual", "boundary", "coboundary",
    "covariant_differential", "cup", "curvature", "delta", "equivalence_check",
    "lift_to_4d", "pairing", "selfdual_residual", "star", "tilde_swap",
]
