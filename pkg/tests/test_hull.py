import itertools
import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from splitrank.errors import UnboundedInput
from splitrank.hull import facet_system, integer_hull, lattice_points
from splitrank.lp import solve_lp
from splitrank.polyhedron import Polyhedron, recession_cone

from corpus import random_polytope

T1 = Polyhedron.from_constraints(2, [((0, -1), 0), ((-1, 1), 0), ((1, 1), 1)])
BOX32 = Polyhedron.from_generators(2, [(0, 0), (F(3, 2), 0), (0, F(3, 2)), (F(3, 2), F(3, 2))])
SLAB = Polyhedron.from_constraints(2, [((-1, 0), 0), ((1, 0), F(3, 2))])
STRIP = Polyhedron.from_constraints(2, [((-1, 0), -F(1, 4)), ((1, 0), F(3, 4))])


def brute_lattice_points(P, radius=8):
    dim = P.dim
    return [p for p in itertools.product(range(-radius, radius + 1), repeat=dim) if P.contains(p)]


def test_lattice_points_examples():
    assert lattice_points(BOX32) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    bounded_strip = Polyhedron.from_constraints(
        2, [((-1, 0), -F(1, 4)), ((1, 0), F(3, 4)), ((0, -1), 0), ((0, 1), 1)])
    assert lattice_points(bounded_strip) == []
    assert lattice_points(T1) == [(0, 0), (1, 0)]


def test_lattice_points_needs_bounded_input():
    with pytest.raises(UnboundedInput):
        lattice_points(SLAB)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 3))
def test_lattice_points_match_brute_force(seed, dim):
    rng = random.Random(seed)
    P = random_polytope(rng, dim, rng.randint(1, 5))
    assert lattice_points(P) == brute_lattice_points(P, 7)


def test_integer_hull_examples():
    unit = Polyhedron.from_generators(2, [(0, 0), (1, 0), (0, 1), (1, 1)])
    assert integer_hull(BOX32) == unit
    assert integer_hull(SLAB) == Polyhedron.from_constraints(2, [((-1, 0), 0), ((1, 0), 1)])
    assert integer_hull(STRIP).is_empty()


def test_integer_hull_with_pointed_recession_cone():
    # {y >= 0, y <= x/2 + 1/3}: unbounded along (2, 1)
    Q = Polyhedron.from_constraints(2, [((0, -1), 0), ((-1, 2), F(2, 3))])
    P = integer_hull(Q)
    assert recession_cone(P) == recession_cone(Q)
    for p in brute_lattice_points(Q, 6):
        assert P.contains(p)
    for v in P.vertices:
        assert all(F(x).denominator == 1 for x in v) and Q.contains(v)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_integer_hull_preserves_lattice_points(seed):
    rng = random.Random(seed)
    Q = random_polytope(rng, 2, rng.randint(1, 5))
    P = integer_hull(Q)
    assert P.is_subset(Q)
    assert brute_lattice_points(P, 7) == brute_lattice_points(Q, 7)


def _check_facet_system(Q):
    P = integer_hull(Q)
    fs = facet_system(Q, P)
    assert all(b >= a for a, b in zip(fs.a, fs.b))
    for c, a, b in zip(fs.C, fs.a, fs.b):
        assert Q.satisfies(c, b)
        if P.is_empty():
            continue
        assert math.gcd(*c) == 1
        assert P.satisfies(c, a)
        assert solve_lp(P, c, "max").value == a
    if not P.is_empty():
        assert Polyhedron.from_constraints(Q.dim, list(zip(fs.C, fs.a))) == P
    return fs


def test_facet_system_box():
    fs = _check_facet_system(BOX32)
    rows = dict(zip(fs.C, zip(fs.a, fs.b)))
    assert rows == {(1, 0): (1, 2), (-1, 0): (0, 0), (0, 1): (1, 2), (0, -1): (0, 0)}


def test_facet_system_empty_hull_convention():
    fs = _check_facet_system(STRIP)
    assert fs.C == ((0, 0),) and fs.a == (-1,) and fs.b == (0,)


def test_facet_system_t1_segment():
    fs = _check_facet_system(T1)
    assert sorted(zip(fs.C, fs.a)) == [((-1, 0), 0), ((0, -1), 0), ((0, 1), 0), ((1, 0), 1)]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_facet_system_random(seed):
    rng = random.Random(seed)
    _check_facet_system(random_polytope(rng, rng.randint(1, 3), rng.randint(1, 5)))
