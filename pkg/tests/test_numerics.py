from fractions import Fraction as F
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from splitrank.errors import NotPrimitive, RankDeficient, ZeroVector
from splitrank.lp import in_cone
from splitrank.numerics import (
    basis_in_cone,
    canonical_subspace_basis,
    det,
    extend_to_lattice_basis,
    hnf,
    in_span_coordinates,
    int_echelon,
    inverse,
    matmul,
    nullspace,
    parallelepiped_lattice_points,
    primitive_vector,
    rank,
    rref,
    solve,
)

small_int = st.integers(-6, 6)
rational = st.builds(F, st.integers(-12, 12), st.integers(1, 6))


# -- primitive_vector -------------------------------------------------------

@pytest.mark.parametrize("v, expected", [
    ((F(1, 2), F(1, 4)), (2, 1)),
    ((3, 6), (1, 2)),
    ((0, F(-5, 3)), (0, -1)),
])
def test_primitive_vector_examples(v, expected):
    assert primitive_vector(v) == expected


def test_primitive_vector_rejects_zero():
    with pytest.raises(ZeroVector):
        primitive_vector((0, 0, 0))


@given(st.lists(rational, min_size=1, max_size=4), st.builds(F, st.integers(1, 20), st.integers(1, 20)))
def test_primitive_vector_scale_invariant_and_idempotent(v, lam):
    if not any(v):
        return
    p = primitive_vector(v)
    assert primitive_vector([lam * x for x in v]) == p
    assert primitive_vector(p) == p
    # positive multiple of the input
    ratios = {F(x) / y for x, y in zip(p, v) if y}
    assert len(ratios) == 1 and ratios.pop() > 0


# -- elimination ------------------------------------------------------------

def test_rref_and_nullspace_small():
    R, piv = rref([[2, 4, 6], [1, 1, 1]])
    assert piv == [0, 1]
    assert R == [(1, 0, -1), (0, 1, 2)]
    assert nullspace([[1, 2, 3], [0, 0, 2]], 3) == [(-2, 1, 0)]
    assert nullspace([], 2) == [(1, 0), (0, 1)]


@given(st.lists(st.lists(small_int, min_size=4, max_size=4), min_size=0, max_size=4))
def test_nullspace_is_orthogonal_complement(rows):
    basis = nullspace(rows, 4) if rows else nullspace([], 4)
    for v in basis:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)
    assert len(basis) + (rank(rows) if rows else 0) == 4


@given(st.lists(st.lists(rational, min_size=3, max_size=3), min_size=1, max_size=4))
def test_int_echelon_matches_rref(rows):
    R, piv = rref(rows, 3)
    E, piv2 = int_echelon(rows, 3)
    assert piv == piv2
    for r, e, p in zip(R, E, piv):
        assert tuple(F(x, e[p]) for x in e) == r


def test_canonical_subspace_basis_is_span_invariant():
    a = canonical_subspace_basis([(0, 2, 4), (0, -1, 3)], 3)
    b = canonical_subspace_basis([(0, 1, 0), (0, 5, 7), (0, 0, 0)], 3)
    assert a == b == [(0, 1, 0), (0, 0, 1)]


def test_solve_inverse_det():
    A = [[2, 1], [1, 1]]
    assert solve(A, [3, 2]) == (1, 1)
    assert solve([[1, 1], [2, 2]], [1, 3]) is None
    inv = inverse(A)
    assert matmul(inv, A) == ((1, 0), (0, 1))
    assert det(A) == 1
    assert det([[2, 0, 0], [0, 3, 0], [1, 1, 5]]) == 30
    assert det([[1, 2], [2, 4]]) == 0


# -- Hermite normal form ----------------------------------------------------

def _row_lattice_contains(gens, v):
    coords = in_span_coordinates(gens, v)
    return coords is not None and all(F(c).denominator == 1 for c in coords)


def _check_hnf(W):
    H, U = hnf(W)
    assert matmul(U, W) == tuple(tuple(r) for r in H)
    assert abs(det(U)) == 1
    for h in H:
        assert _row_lattice_contains(W, h)
    for w in W:
        assert _row_lattice_contains(H, w)
    # lower-triangular pivot structure: row i ends at its pivot
    last = -1
    for i, row in enumerate(H):
        nz = [j for j, x in enumerate(row) if x]
        p = nz[-1]
        assert p > last and row[p] > 0
        last = p
        for below in H[i + 1:]:
            assert 0 <= below[p] < row[p]
    return H, U


def test_hnf_identity():
    assert hnf([[1, 0], [0, 1]]) == (((1, 0), (0, 1)), ((1, 0), (0, 1)))


def test_hnf_examples():
    H, _ = _check_hnf([[2, 1], [0, 1]])
    # row lattice of {(2,1),(0,1)} is {(x, y): x even}
    assert H == ((2, 0), (0, 1))
    assert _check_hnf([[2, 0], [0, 2]])[0] == ((2, 0), (0, 2))


def test_hnf_rank_deficient():
    with pytest.raises(RankDeficient):
        hnf([[1, 2], [2, 4]])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda k: st.lists(
    st.lists(small_int, min_size=3, max_size=3), min_size=k, max_size=k)))
def test_hnf_identities_random(W):
    if rank(W) < len(W):
        with pytest.raises(RankDeficient):
            hnf(W)
        return
    _check_hnf(W)


# -- lattice basis extension ------------------------------------------------

def test_extend_examples():
    assert extend_to_lattice_basis([(1, 0)]) == ((1, 0), (0, 1))
    B = extend_to_lattice_basis([(1, 2)])
    assert B[0] == (1, 2) and abs(det(B)) == 1
    with pytest.raises(NotPrimitive) as exc:
        extend_to_lattice_basis([(2, 0)])
    assert exc.value.witness == (1, 0)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(small_int, min_size=3, max_size=3), min_size=1, max_size=3))
def test_extend_random(ws):
    if rank(ws) < len(ws):
        return
    try:
        B = extend_to_lattice_basis(ws)
    except NotPrimitive as exc:
        # the witness is integral, in the span, but not an integer combination
        coords = in_span_coordinates(ws, exc.witness)
        assert coords is not None
        assert not all(F(c).denominator == 1 for c in coords)
        return
    assert [tuple(r) for r in B[:len(ws)]] == [tuple(w) for w in ws]
    assert abs(det(B)) == 1


# -- basis inside a cone ----------------------------------------------------

def _check_basis_in_cone(gs, n):
    ws = basis_in_cone(gs, n)
    assert len(ws) == len(gs)
    for w in ws:
        assert in_cone(w, gs)
    assert parallelepiped_lattice_points(ws) == []
    B = extend_to_lattice_basis(ws, n)
    assert abs(det(B)) == 1
    return ws


def test_basis_in_cone_examples():
    assert sorted(_check_basis_in_cone([(1, 0), (0, 1)], 2)) == [(0, 1), (1, 0)]
    ws = _check_basis_in_cone([(1, 0), (1, 2)], 2)
    assert abs(det(ws)) == 1
    assert [tuple(w) for w in _check_basis_in_cone([(1, 1)], 2)] == [(1, 1)]


def test_basis_in_cone_fractional_generator():
    ws = _check_basis_in_cone([(F(1, 2), F(3, 2))], 2)
    assert [tuple(w) for w in ws] == [(1, 3)]


def test_parallelepiped_points_found():
    # (1, 1) = 1/2 (2, 0) + 1/2 (0, 2)
    pts = parallelepiped_lattice_points([(2, 0), (0, 2)])
    assert (1, 1) in pts and (1, 0) in pts


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 3).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=1, max_size=n))))
def test_basis_in_cone_random(args):
    n, gs = args
    if rank(gs) < len(gs):
        return
    _check_basis_in_cone(gs, n)


def test_parallelepiped_enumeration_is_exhaustive():
    hs = [(3, 1), (0, 2)]
    brute = set()
    for x, y in itertools.product(range(-5, 6), repeat=2):
        coords = in_span_coordinates(hs, (x, y))
        if coords and all(0 <= c < 1 for c in coords) and (x, y) != (0, 0):
            brute.add((x, y))
    assert set(parallelepiped_lattice_points(hs)) == brute
