import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dbog import su2

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
coords = arrays(float, 3, elements=finite)
matrices = st.builds(
    lambda re, im: re + 1j * im,
    arrays(float, (2, 2), elements=finite),
    arrays(float, (2, 2), elements=finite),
)


def test_embed_zero():
    assert np.array_equal(su2.embed([0, 0, 0]), np.zeros((2, 2)))


def test_embed_first_basis_vector():
    assert np.array_equal(su2.embed([1, 0, 0]), np.array([[0, 1j], [1j, 0]]))


def test_embed_matches_pauli_basis():
    for m in range(3):
        e = np.zeros(3)
        e[m] = 1
        assert np.array_equal(su2.embed(e), 1j * su2.SIGMA[m])


@given(coords)
def test_embed_is_traceless_antihermitian(v):
    m = su2.embed(v)
    assert abs(su2.trace(m)) <= 1e-14
    assert np.abs(m + su2.dagger(m)).max() <= 1e-14


@given(coords)
def test_extract_inverts_embed_exactly(v):
    assert np.array_equal(su2.extract(su2.embed(v)), v)


def test_project_identity_is_zero():
    assert np.array_equal(su2.project_su2(np.eye(2)), np.zeros((2, 2)))


@given(coords)
def test_project_fixes_su2(v):
    m = su2.embed(v)
    assert np.abs(su2.project_su2(m) - m).max() <= 1e-14


def _lstsq_projection(m):
    # minimise ||m - embed(v)||_F over v: a real linear least-squares problem
    basis = np.stack([su2.embed(e) for e in np.eye(3)])
    design = np.stack([b.ravel() for b in basis], axis=1)
    design = np.concatenate([design.real, design.imag])
    target = np.concatenate([m.ravel().real, m.ravel().imag])
    v, *_ = np.linalg.lstsq(design, target, rcond=None)
    return su2.embed(v)


def test_project_is_nearest_point(rng):
    for _ in range(50):
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        p = su2.project_su2(m)
        assert np.abs(p - _lstsq_projection(m)).max() <= 1e-12
        # no nearby su(2) element does better
        for _ in range(20):
            q = p + su2.embed(1e-3 * rng.normal(size=3))
            assert su2.frobenius_norm(m - q) >= su2.frobenius_norm(m - p)


@given(matrices)
def test_project_idempotent(m):
    p = su2.project_su2(m)
    assert np.abs(su2.project_su2(p) - p).max() <= 1e-14 * max(1.0, np.abs(m).max())


@given(matrices)
def test_pythagoras(m):
    p = su2.project_su2(m)
    lhs = su2.frobenius_norm(m) ** 2
    rhs = su2.frobenius_norm(p) ** 2 + su2.frobenius_norm(m - p) ** 2
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, lhs)


def test_frobenius_examples():
    assert su2.frobenius_norm(np.zeros((2, 2))) == 0
    assert su2.frobenius_norm(np.eye(2)) == np.sqrt(2)


def test_frobenius_equals_trace_form(rng):
    for _ in range(50):
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        expected = np.sqrt(su2.trace(su2.dagger(m) @ m).real)
        assert su2.frobenius_norm(m) == pytest.approx(expected, rel=1e-14)


def test_mul_matches_matmul_and_ring_axioms(rng):
    a, b, c = (rng.normal(size=(5, 2, 2)) + 1j * rng.normal(size=(5, 2, 2)) for _ in range(3))
    assert np.allclose(su2.mul(a, b), a @ b, atol=1e-14)
    assert np.allclose(su2.mul(su2.mul(a, b), c), su2.mul(a, su2.mul(b, c)), atol=1e-12)
    assert np.allclose(su2.mul(a, b + c), su2.mul(a, b) + su2.mul(a, c), atol=1e-13)
    assert np.allclose(su2.dagger(su2.mul(a, b)), su2.mul(su2.dagger(b), su2.dagger(a)), atol=1e-14)
    assert np.allclose(su2.trace(su2.mul(a, b)), su2.trace(su2.mul(b, a)), atol=1e-13)


def test_mul_does_not_depend_on_batch_shape(rng):
    a = rng.normal(size=(7, 2, 2)) + 1j * rng.normal(size=(7, 2, 2))
    b = rng.normal(size=(7, 2, 2)) + 1j * rng.normal(size=(7, 2, 2))
    batched = su2.mul(a, b)
    for i in range(7):
        assert np.array_equal(su2.mul(a[i], b[i]), batched[i])


def test_pauli_pairing_is_gradient_of_inner_product(rng):
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    grad = su2.pauli_pairing(m)
    for c in range(3):
        e = np.zeros(3)
        e[c] = 1
        assert grad[c] == pytest.approx(np.sum(np.conj(su2.embed(e)) * m).real)


def test_json_round_trip(rng):
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    data = su2.to_json(m)
    assert np.array_equal(np.asarray(data).shape, (2, 2, 2))
    assert np.array_equal(su2.from_json(data), m)
    with pytest.raises(ValueError):
        su2.from_json([[1, 2], [3, 4]])
