import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dbog.calculus import Cochain
from dbog.lattice import FREE, BasisElement, Chain, Lattice, boundary, pairing
from dbog.sampling import make_rng, random_chain, random_cochain


def test_shift_wraps_on_periodic_axis():
    lat = Lattice.cube(3, 3)
    assert lat.shift((2, 0, 0), 0) == (0, 0, 0)
    assert Lattice.cube(4, 2).shift((1, 1), 1) == (1, 2)


def test_shift_leaves_free_lattice():
    lat = Lattice((3, 3, 3), FREE)
    k = lat.shift((2, 0, 0), 0)
    assert k == (3, 0, 0)
    assert not lat.in_range(k)


@pytest.mark.parametrize("extents", [(2, 3), (4, 4, 5), (3,)])
def test_periodic_shift_cycles(extents):
    lat = Lattice(extents)
    for k in lat.sites():
        for axis, n in enumerate(extents):
            moved = k
            for _ in range(n):
                moved = lat.shift(moved, axis)
            assert moved == k


def test_lattice_validation():
    with pytest.raises(ValueError):
        Lattice(())
    with pytest.raises(ValueError):
        Lattice((1, 3))  # periodic extent 1 makes the shift trivial
    with pytest.raises(ValueError):
        Lattice((3, 3), ("periodic",))
    assert Lattice((1, 3), (FREE, "periodic")).n == 2


def test_lattice_json_round_trip():
    lat = Lattice((3, 4, 2), ("periodic", FREE, "periodic"))
    assert Lattice.from_json(lat.to_json()) == lat
    assert lat.to_json() == {"n": 3, "extents": [3, 4, 2], "boundary": ["periodic", "free", "periodic"]}


def test_boundary_of_vertex_is_zero():
    lat = Lattice((5,))
    assert len(boundary(Chain.basis(lat, (2,), ()))) == 0


def test_boundary_of_edge():
    lat = Lattice((5,))
    expected = Chain(lat, {((3,), ()): 1, ((2,), ()): -1})
    assert boundary(Chain.basis(lat, (2,), (0,))) == expected


def test_boundary_of_square_by_hand():
    # faces of e_1 x e_2 at k: +e_2 at tau_1 k, -e_2 at k, -e_1 at tau_2 k, +e_1 at k
    lat = Lattice.cube(4, 2)
    sq = boundary(Chain.basis(lat, (1, 1), (0, 1)))
    expected = Chain(lat, {
        ((2, 1), (1,)): 1, ((1, 1), (1,)): -1,
        ((1, 2), (0,)): -1, ((1, 1), (0,)): 1,
    })
    assert sq == expected
    assert len(boundary(sq)) == 0


def test_boundary_squared_on_4x4_square_with_wrap():
    lat = Lattice.cube(4, 2)
    assert len(boundary(boundary(Chain.basis(lat, (3, 3), (0, 1))))) == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([(3, 3), (2, 3, 4), (2, 2, 2, 2)]))
def test_boundary_squared_vanishes(seed, extents):
    lat = Lattice(extents)
    rng = make_rng(seed)
    for r in range(2, lat.n + 1):
        assert len(boundary(boundary(random_chain(lat, r, rng)))) == 0


def test_boundary_squared_free_lattice():
    lat = Lattice((3, 3, 3), FREE)
    rng = make_rng(4)
    for r in (2, 3):
        assert len(boundary(boundary(random_chain(lat, r, rng)))) == 0


def test_chain_normalization():
    lat = Lattice.cube(3, 2)
    c = Chain(lat, {((3, 0), (0,)): 2, ((0, 0), (0,)): -2, ((1, 1), ()): 0})
    assert len(c) == 0
    assert Chain(lat, {((4, -1), (1,)): 1}).terms == {BasisElement((1, 2), (1,)): 1}
    with pytest.raises(ValueError):
        Chain(lat, {((0, 0), (1, 0)): 1})


def test_pairing_basis_rule():
    lat = Lattice.cube(3, 3)
    a = np.array([[1, 2j], [3, 4]])
    vals = Cochain.zeros(lat, 1).values.copy()
    vals[(1, 2, 0, 1)] = a
    phi = Cochain(lat, 1, vals)
    assert np.array_equal(pairing(Chain.basis(lat, (1, 2, 0), (1,)), phi), a)
    assert np.array_equal(pairing(Chain.basis(lat, (1, 2, 0), (0,)), phi), np.zeros((2, 2)))
    assert np.array_equal(pairing(Chain.basis(lat, (0, 2, 0), (1,)), phi), np.zeros((2, 2)))
    # wrong degree pairs to zero
    assert np.array_equal(pairing(Chain.basis(lat, (1, 2, 0), ()), phi), np.zeros((2, 2)))


def test_pairing_scales_with_chain(rng, cube3):
    phi = random_cochain(cube3, 1, rng, integer=False)
    c = 2 * Chain.basis(cube3, (0, 1, 2), (0,))
    assert np.array_equal(pairing(c, phi), 2 * phi[(0, 1, 2), (0,)])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(-3, 3))
def test_pairing_bilinear(seed, alpha):
    lat = Lattice.cube(3, 3)
    rng = make_rng(seed)
    for r in range(4):
        c1, c2 = random_chain(lat, r, rng), random_chain(lat, r, rng)
        phi = random_cochain(lat, r, rng, integer=False)
        psi = random_cochain(lat, r, rng, integer=False)
        lhs = pairing(alpha * c1 + c2, phi)
        assert np.abs(lhs - (alpha * pairing(c1, phi) + pairing(c2, phi))).max() <= 1e-13
        lhs = pairing(c1, phi + psi)
        assert np.abs(lhs - (pairing(c1, phi) + pairing(c1, psi))).max() <= 1e-13


def test_pairing_requires_matching_complex(cube3, rng):
    phi = random_cochain(cube3, 1, rng)
    with pytest.raises(ValueError):
        pairing(Chain.basis(cube3, (0, 0, 0), (0,)).as_tilde(), phi)
    tphi = random_cochain(cube3, 1, rng, tilde=True)
    c = Chain.basis(cube3, (0, 0, 0), (0,)).as_tilde()
    assert np.array_equal(pairing(c, tphi), tphi[(0, 0, 0), (0,)])
