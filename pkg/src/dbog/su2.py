"""2x2 complex matrices, the su(2) subspace and its Pauli coordinates.

Matrices are plain ``numpy`` arrays whose last two axes have shape (2, 2);
every function here broadcasts over any leading axes.
"""

import numpy as np

SIGMA = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
"""Pauli matrices sigma_1, sigma_2, sigma_3."""

SU2_BASIS = 1j * SIGMA
"""The basis {i sigma_1, i sigma_2, i sigma_3} of su(2)."""

IDENTITY = np.eye(2, dtype=complex)


def zeros(shape=()):
    return np.zeros(tuple(shape) + (2, 2), dtype=complex)


def mul(a, b):
    """Batched matrix product ``a @ b``.

    Written out entry by entry so that the rounding of a given entry does
    not depend on the batch shape; two code paths multiplying the same
    operands always agree bit for bit.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    out = np.empty(np.broadcast_shapes(a.shape, b.shape), dtype=np.result_type(a, b))
    for i in range(2):
        for j in range(2):
            out[..., i, j] = a[..., i, 0] * b[..., 0, j] + a[..., i, 1] * b[..., 1, j]
    return out


def dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def trace(m):
    return m[..., 0, 0] + m[..., 1, 1]


def frobenius_norm(m):
    return np.sqrt(np.sum(np.abs(m) ** 2, axis=(-2, -1)))


def embed(v):
    """Map Pauli coordinates ``(..., 3)`` to su(2) matrices ``a i s1 + b i s2 + c i s3``."""
    v = np.asarray(v, dtype=float)
    a, b, c = v[..., 0], v[..., 1], v[..., 2]
    m = np.empty(v.shape[:-1] + (2, 2), dtype=complex)
    m[..., 0, 0] = 1j * c
    m[..., 0, 1] = b + 1j * a
    m[..., 1, 0] = -b + 1j * a
    m[..., 1, 1] = -1j * c
    return m


def extract(m):
    """Pauli coordinates of the su(2) projection of ``m``.

    Exact inverse of :func:`embed` on its image.
    """
    m = np.asarray(m)
    a = (m[..., 0, 1].imag + m[..., 1, 0].imag) / 2
    b = (m[..., 0, 1].real - m[..., 1, 0].real) / 2
    c = (m[..., 0, 0].imag - m[..., 1, 1].imag) / 2
    return np.stack([a, b, c], axis=-1)


def project_su2(m):
    """Orthogonal (Frobenius) projection onto su(2): traceless part of (m - m^H)/2."""
    m = np.asarray(m, dtype=complex)
    skew = (m - dagger(m)) / 2
    return skew - (trace(skew) / 2)[..., None, None] * IDENTITY


def su2_defect(m):
    """Frobenius distance from ``m`` to su(2)."""
    return frobenius_norm(m - project_su2(m))


def pauli_pairing(m):
    """``Re tr((i sigma_c)^H m)`` for c = 1, 2, 3, stacked on a trailing axis.

    This is the Frobenius inner product of ``m`` with each su(2) basis
    element, i.e. the gradient of ``Re <m, embed(v)>`` with respect to ``v``.
    """
    m = np.asarray(m)
    return 2 * extract(m)


def to_json(m):
    """Row-major ``[[ [re, im], [re, im] ], [ ... ]]``."""
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def from_json(data):
    arr = np.asarray(data, dtype=float)
    if arr.shape != (2, 2, 2):
        raise ValueError(f"expected a 2x2 matrix of [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]
