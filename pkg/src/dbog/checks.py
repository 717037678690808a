"""Named executable checks of the algebraic identities of the calculus.

Each check draws seeded random data on one lattice and returns the largest
discrepancy it saw. Checks that do not apply to a lattice (for instance the
Bogomolny system off three dimensions) report ``skipped``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations, permutations

import numpy as np

from . import gauge
from .calculus import (
    Cochain, coboundary, complement, cup, delta, shuffle_sign, star, tilde_swap,
)
from .lattice import Chain, Lattice, boundary, pairing
from .sampling import (
    ABELIAN_KINDS, abelian_connection, make_rng, random_chain, random_cochain, random_connection, random_higgs,
)

SUITES = ("calculus", "gauge", "reduction")

DEFAULT_SIZES = {
    "calculus": (Lattice.cube(3, 3), Lattice.cube(2, 4)),
    "gauge": (Lattice.cube(2, 3), Lattice.cube(3, 3), Lattice.cube(2, 4)),
    "reduction": (Lattice.cube(2, 3), Lattice.cube(3, 3)),
}

# Signs printed for the cup product of two edges in three dimensions:
# (a, b) -> coefficient of the (a, b) face in e_a^k cup e_b^{tau_a k}.
CUP_TABLE_3D = {
    (0, 1): 1, (0, 2): 1, (1, 2): 1,
    (1, 0): -1, (2, 0): -1, (2, 1): -1,
}

# Printed star tables: J -> (complement, sign).
STAR_TABLE = {
    3: {(0, 1): ((2,), 1), (0, 2): ((1,), -1), (1, 2): ((0,), 1)},
    4: {
        (0, 1): ((2, 3), 1), (0, 2): ((1, 3), -1), (0, 3): ((1, 2), 1),
        (1, 2): ((0, 3), 1), (1, 3): ((0, 2), -1), (2, 3): ((0, 1), 1),
    },
}


class Skip(Exception):
    pass


@dataclass
class Outcome:
    max_discrepancy: float
    tolerance: float
    passed: bool = None
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.passed is None:
            self.passed = bool(self.max_discrepancy <= self.tolerance)


@dataclass
class CheckResult:
    suite: str
    name: str
    lattice: str
    seed: int
    trials: int
    status: str
    max_discrepancy: float = None
    tolerance: float = None
    seconds: float = 0.0
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "name": self.name,
            "lattice": self.lattice,
            "seed": self.seed,
            "trials": self.trials,
            "status": self.status,
            "max_discrepancy": self.max_discrepancy,
            "tolerance": self.tolerance,
            "seconds": round(self.seconds, 6),
            "detail": self.detail,
        }


REGISTRY: dict[str, list] = {s: [] for s in SUITES}


def check(suite, trials=20):
    def register(fn):
        REGISTRY[suite].append((fn.__name__, fn, trials))
        return fn
    return register


def _diff(a: Cochain, b: Cochain) -> float:
    ok = a.valid & b.valid
    d = np.abs(a.values - b.values).max(axis=(-2, -1))[ok]
    return float(d.max()) if d.size else 0.0


def _chain_size(c: Chain) -> float:
    return float(max((abs(v) for v in c.terms.values()), default=0))


# calculus suite

@check("calculus")
def boundary_squared(lattice, rng, trials):
    worst = 0.0
    for _ in range(trials):
        for r in range(2, lattice.n + 1):
            worst = max(worst, _chain_size(boundary(boundary(random_chain(lattice, r, rng)))))
    return Outcome(worst, 0.0)


@check("calculus")
def duality(lattice, rng, trials):
    """<boundary c, phi> = <c, d phi> in exact and in floating-point arithmetic."""
    exact = approx = 0.0
    for t in range(trials):
        r = t % lattice.n
        c = random_chain(lattice, r + 1, rng)
        for integer in (True, False):
            phi = random_cochain(lattice, r, rng, integer=integer)
            d = float(np.abs(pairing(boundary(c), phi) - pairing(c, coboundary(phi))).max())
            if integer:
                exact = max(exact, d)
            else:
                approx = max(approx, d)
    return Outcome(max(exact, approx), 1e-12, passed=exact == 0 and approx <= 1e-12,
                   detail={"exact": exact, "float": approx})


@check("calculus")
def coboundary_squared(lattice, rng, trials):
    worst = 0.0
    for _ in range(trials):
        for r in range(lattice.n - 1):
            worst = max(worst, coboundary(coboundary(random_cochain(lattice, r, rng))).max_abs())
    return Outcome(worst, 0.0)


@check("calculus")
def differences_commute(lattice, rng, trials):
    worst = 0.0
    for _ in range(trials):
        phi = random_cochain(lattice, 0, rng)
        for i, j in combinations(range(lattice.n), 2):
            worst = max(worst, _diff(delta(delta(phi, i), j), delta(delta(phi, j), i)))
    return Outcome(worst, 0.0)


def compatible_degrees(n):
    """Degree pairs (r, p) for which both sides of the Leibniz rule exist."""
    return [(r, p) for r in range(n + 1) for p in range(n + 1) if r + p < n]


@check("calculus")
def leibniz(lattice, rng, trials):
    worst = 0.0
    pairs = compatible_degrees(lattice.n)
    for t in range(trials):
        r, p = pairs[t % len(pairs)]
        phi = random_cochain(lattice, r, rng)
        psi = random_cochain(lattice, p, rng)
        lhs = coboundary(cup(phi, psi))
        rhs = cup(coboundary(phi), psi)
        rhs = rhs - cup(phi, coboundary(psi)) if r % 2 else rhs + cup(phi, coboundary(psi))
        worst = max(worst, _diff(lhs, rhs))
    return Outcome(worst, 0.0)


def _cup_1d(left, right, size):
    """Product of two cells of the 1-dimensional complex on a periodic circle.

    A cell is ``(is_edge, index)``; returns the product cell or None.
    """
    (le, li), (re, ri) = left, right
    if not le and not re and li == ri:
        return (False, li)
    if le and not re and ri == (li + 1) % size:
        return (True, li)
    if not le and re and li == ri:
        return (True, li)
    return None


def cup_basis_oracle(lattice, left, right):
    """Cup of two basis cells by factor-wise 1-dimensional products and the Koszul sign.

    ``left`` and ``right`` are ``(k, J)``. Returns ``(sign, (k, J))`` or None.
    """
    n = lattice.n
    lf = [(a in left[1], left[0][a]) for a in range(n)]
    rf = [(a in right[1], right[0][a]) for a in range(n)]
    cells = [_cup_1d(lf[a], rf[a], lattice.extents[a]) for a in range(n)]
    if any(c is None for c in cells):
        return None
    swaps = sum(1 for a in range(n) for b in range(a + 1, n) if rf[a][0] and lf[b][0])
    k = tuple(c[1] for c in cells)
    J = tuple(a for a in range(n) if cells[a][0])
    return (-1 if swaps % 2 else 1), (k, J)


def _basis_cochain(lattice, k, J, value):
    vals = Cochain.zeros(lattice, len(J)).values.copy()
    vals[tuple(k) + (lattice.component_index(J),)] = value
    return Cochain(lattice, len(J), vals)


def _cup_against_oracle(lattice, left, right, a, b):
    prod = cup(_basis_cochain(lattice, *left, a), _basis_cochain(lattice, *right, b))
    expected = Cochain.zeros(lattice, prod.degree).values.copy()
    hit = cup_basis_oracle(lattice, left, right)
    if hit is not None:
        sign, (k, J) = hit
        expected[k + (lattice.component_index(J),)] = sign * (a @ b)
    return float(np.abs(prod.values - expected).max()), hit


@check("calculus")
def cup_table(lattice, rng, trials):
    """Edge-by-edge products against the 1-dimensional rules, plus random basis pairs."""
    if not lattice.periodic or lattice.n < 2:
        raise Skip
    a = np.array([[1, 2j], [3, -1]])
    b = np.array([[2, -1], [1j, 1]])
    worst = 0.0
    table_ok = True
    k = tuple(min(1, e - 1) for e in lattice.extents)
    for i, j in permutations(range(lattice.n), 2):
        shifted = lattice.shift(k, i)
        d, hit = _cup_against_oracle(lattice, (k, (i,)), (shifted, (j,)), a, b)
        worst = max(worst, d)
        face = tuple(sorted((i, j)))
        table_ok &= hit is not None and hit[1] == (k, face)
        if lattice.n == 3:
            table_ok &= hit[0] == CUP_TABLE_3D[(i, j)]
        # the unshifted product vanishes
        d, hit = _cup_against_oracle(lattice, (k, (i,)), (k, (j,)), a, b)
        worst = max(worst, d)
        table_ok &= hit is None
    for _ in range(trials):
        r = int(rng.integers(0, lattice.n + 1))
        p = int(rng.integers(0, lattice.n - r + 1))
        cells_r, cells_p = lattice.edge_sets(r), lattice.edge_sets(p)
        k1 = tuple(int(rng.integers(0, e)) for e in lattice.extents)
        J1 = cells_r[int(rng.integers(0, len(cells_r)))]
        J2 = cells_p[int(rng.integers(0, len(cells_p)))]
        k2 = k1
        if rng.random() < 0.7:
            for axis in J1:
                k2 = lattice.shift(k2, axis)
        if rng.random() < 0.3:
            axis = int(rng.integers(0, lattice.n))
            k2 = lattice.shift(k2, axis)
        worst = max(worst, _cup_against_oracle(lattice, (k1, J1), (k2, J2), a, b)[0])
    return Outcome(worst, 0.0, passed=worst == 0 and table_ok, detail={"table_matches": table_ok})


@check("calculus")
def star_table(lattice, rng, trials):
    if lattice.n not in STAR_TABLE:
        raise Skip
    ok = True
    for J, (Jc, sign) in STAR_TABLE[lattice.n].items():
        image = star(_basis_cochain(lattice, (0,) * lattice.n, J, np.eye(2)))
        expected = _basis_cochain(lattice, (0,) * lattice.n, Jc, sign * np.eye(2))
        ok &= image.tilde and np.array_equal(image.values, expected.values)
    return Outcome(0.0 if ok else 1.0, 0.0)


@check("calculus")
def star_star(lattice, rng, trials):
    worst = 0.0
    for _ in range(trials):
        for r in range(lattice.n + 1):
            phi = random_cochain(lattice, r, rng)
            sign = (-1) ** (r * (lattice.n - r))
            twice = star(star(phi))
            if twice.tilde != phi.tilde:
                return Outcome(np.inf, 0.0)
            worst = max(worst, _diff(twice, sign * phi))
    return Outcome(worst, 0.0)


@check("calculus")
def tilde_identities(lattice, rng, trials):
    worst = 0.0
    for t in range(trials):
        r = t % (lattice.n + 1)
        phi = random_cochain(lattice, r, rng)
        worst = max(worst, _diff(tilde_swap(tilde_swap(phi)), phi))
        worst = max(worst, _diff(tilde_swap(star(phi)), star(tilde_swap(phi))))
        if r < lattice.n:
            worst = max(worst, _diff(tilde_swap(coboundary(phi)), coboundary(tilde_swap(phi))))
        p = int(rng.integers(0, lattice.n - r + 1))
        psi = random_cochain(lattice, p, rng)
        worst = max(worst, _diff(tilde_swap(cup(phi, psi)), cup(tilde_swap(phi), tilde_swap(psi))))
    return Outcome(worst, 0.0)


@check("calculus")
def cup_associativity(lattice, rng, trials):
    worst = 0.0
    for _ in range(trials):
        r = int(rng.integers(0, lattice.n + 1))
        p = int(rng.integers(0, lattice.n - r + 1))
        q = int(rng.integers(0, lattice.n - r - p + 1))
        a, b, c = (random_cochain(lattice, d, rng) for d in (r, p, q))
        worst = max(worst, _diff(cup(cup(a, b), c), cup(a, cup(b, c))))
    return Outcome(worst, 0.0)


# gauge suite

def _components_diff(generic: Cochain, hand: dict, sign=1) -> float:
    worst = 0.0
    for J, arr in hand.items():
        ok = generic.component_valid(J)
        d = np.abs(generic.component(J) - sign * arr).max(axis=(-2, -1))[ok]
        if d.size:
            worst = max(worst, float(d.max()))
    return worst


@check("gauge")
def curvature_paths(lattice, rng, trials):
    worst = 0.0
    for _ in range(trials):
        A = random_connection(lattice, rng, integer=True)
        worst = max(worst, _components_diff(gauge.curvature(A), gauge.curvature_components(A)))
    return Outcome(worst, 0.0)


@check("gauge")
def covariant_paths(lattice, rng, trials):
    worst = 0.0
    for _ in range(trials):
        A = random_connection(lattice, rng, integer=True)
        Phi = random_higgs(lattice, rng, integer=True)
        hand = {(i,): v for i, v in gauge.covariant_components(A, Phi).items()}
        worst = max(worst, _components_diff(gauge.covariant_differential(A, Phi), hand))
    return Outcome(worst, 0.0)


@check("gauge")
def bogomolny_paths(lattice, rng, trials):
    if lattice.n != 3:
        raise Skip
    worst = 0.0
    for _ in range(trials):
        A = random_connection(lattice, rng, integer=True)
        Phi = random_higgs(lattice, rng, integer=True)
        res = gauge.bogomolny_residual(A, Phi).residual
        worst = max(worst, _components_diff(res, gauge.bogomolny_components(A, Phi)))
    return Outcome(worst, 0.0)


@check("gauge")
def selfdual_paths(lattice, rng, trials):
    """Generic F - iota star F against the three component equations.

    The other three planes of the generic residual carry the same equations up to sign.
    """
    if lattice.n == 3:
        lattice = Lattice(lattice.extents + (2,), lattice.boundary + ("periodic",))
    if lattice.n != 4:
        raise Skip
    worst = 0.0
    for _ in range(trials):
        A = random_connection(lattice, rng, integer=True)
        res = gauge.selfdual_residual(A)
        hand = gauge.selfdual_components(A)
        worst = max(worst, _components_diff(res, hand))
        for J, v in hand.items():
            # star is an involution on 4D 2-forms, so R on the complement is -sign(J) R_J
            mirrored = {complement(J, 4): v}
            worst = max(worst, _components_diff(res, mirrored, sign=-shuffle_sign(J, 4)))
    return Outcome(worst, 0.0)


@check("gauge")
def su2_caveat(lattice, rng, trials):
    """Curvature of a generic su(2) connection leaves su(2); an abelian one whose
    cup products cancel does not. The fully site-dependent abelian defect is
    reported alongside for reference."""
    smallest = np.inf
    abelian = 0.0
    general = 0.0
    for t in range(trials):
        smallest = min(smallest, gauge.su2_defect(gauge.curvature(random_connection(lattice, rng))))
        kind = ABELIAN_KINDS[t % 3]
        generator = int(rng.integers(0, 3))
        A = abelian_connection(lattice, rng, kind=kind, generator=generator)
        abelian = max(abelian, gauge.su2_defect(gauge.curvature(A)))
        A = abelian_connection(lattice, rng, kind="general", generator=generator)
        general = max(general, gauge.su2_defect(gauge.curvature(A)))
    return Outcome(abelian, 1e-14, passed=bool(smallest > 1e-6 and abelian <= 1e-14),
                   detail={"min_generic_defect": smallest, "max_abelian_defect": abelian,
                           "max_general_abelian_defect": general})


# reduction suite

@check("reduction")
def dimensional_reduction(lattice, rng, trials):
    """Lifted self-dual residual equals the Bogomolny residual on every slice, for N4 = 2 and 5."""
    if lattice.n != 3:
        raise Skip
    worst = 0.0
    slices_agree = True
    for _ in range(trials):
        A = random_connection(lattice, rng)
        Phi = random_higgs(lattice, rng)
        reports = [gauge.equivalence_check(A, Phi, n4) for n4 in (2, 5)]
        worst = max(worst, *(r.max_discrepancy for r in reports))
        slices_agree &= reports[0].max_discrepancy == reports[1].max_discrepancy
        res = gauge.selfdual_residual(gauge.lift_to_4d(A, Phi, 5))
        slices_agree &= bool(np.all(res.values == res.values[:, :, :, :1]))
    return Outcome(worst, 0.0, passed=worst == 0 and slices_agree,
                   detail={"slice_independent": slices_agree})


def run_check(suite, name, fn, lattice, seed, trials) -> CheckResult:
    rng = make_rng([seed, SUITES.index(suite), _stable_hash(name), *lattice.extents])
    start = time.perf_counter()
    try:
        out = fn(lattice, rng, trials)
    except Skip:
        return CheckResult(suite, name, str(lattice), seed, trials, "skipped",
                           seconds=time.perf_counter() - start)
    return CheckResult(
        suite, name, str(lattice), seed, trials,
        "pass" if out.passed else "fail",
        max_discrepancy=float(out.max_discrepancy),
        tolerance=out.tolerance,
        seconds=time.perf_counter() - start,
        detail={k: (float(v) if isinstance(v, (float, np.floating)) else v) for k, v in out.detail.items()},
    )


def _stable_hash(name: str) -> int:
    return sum((i + 1) * ord(ch) for i, ch in enumerate(name))


def run_suite(suite, seed=0, lattices=None, trials=None, only=None):
    """Yield one :class:`CheckResult` per (check, lattice) of ``suite``."""
    lattices = lattices or DEFAULT_SIZES[suite]
    for name, fn, default_trials in REGISTRY[suite]:
        if only is not None and name not in only:
            continue
        for lattice in lattices:
            yield run_check(suite, name, fn, lattice, seed, trials or default_trials)


def get_check(name):
    for suite, entries in REGISTRY.items():
        for entry_name, fn, trials in entries:
            if entry_name == name:
                return suite, fn
    raise KeyError(name)
