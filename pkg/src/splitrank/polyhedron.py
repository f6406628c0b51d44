"""Exact rational polyhedra in both H- and V-representation.

Every :class:`Polyhedron` is built in canonical form:

* the H-representation is irredundant, implicit equalities are promoted to
  equalities, equalities are in reduced echelon form scaled to primitive
  integral coefficients, and each inequality is reduced modulo the
  equalities, scaled to primitive integral coefficients and sorted;
* the V-representation lists the vertices of ``P ∩ lin(P)^⊥``, primitive
  integral extreme rays inside ``lin(P)^⊥`` and a canonical primitive basis of
  the lineality space.

Two polyhedra are equal as point sets iff their canonical H-representations
are identical, so ``==`` is exact set equality.

Conversions use the integer double description kernel on homogenized cones.
"""
from __future__ import annotations

import enum
import operator
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, NamedTuple, Sequence

from . import kernel
from .errors import DimensionMismatch, EmptyPolyhedron, InvalidObjective
from .numerics import (
    canonical_subspace_basis,
    dot,
    frac,
    int_primitive,
    nullspace,
    rank,
    rref,
    scale_to_integers,
)


class LinIneq(NamedTuple):
    """``coeffs . x <= rhs`` (or ``==`` when stored among equalities)."""

    coeffs: tuple
    rhs: Fraction

    def value(self, x) -> Fraction:
        return dot(self.coeffs, x)


class HRep(NamedTuple):
    dim: int
    inequalities: tuple
    equalities: tuple


class VRep(NamedTuple):
    vertices: tuple
    rays: tuple
    lineality: tuple


class Relation(enum.Enum):
    EQUAL = "Equal"
    SUBSET_STRICT = "SubsetStrict"
    SUPERSET_STRICT = "SupersetStrict"
    INCOMPARABLE = "Incomparable"


def _scale_row(a: Sequence, b) -> LinIneq:
    """Positive multiple of ``(a, b)`` with primitive integral ``a``."""
    a = [frac(x) for x in a]
    b = frac(b)
    den = lcm(*(x.denominator for x in a))
    ints = [x.numerator * (den // x.denominator) for x in a]
    g = gcd(*ints)
    if g == 0:
        return LinIneq(tuple(ints), b * den)
    return LinIneq(tuple(x // g for x in ints), Fraction(b.numerator * den, b.denominator * g))


def _homog(b, a) -> list:
    """Integer row ``(b, -a)`` scaled so that ``b t - a.x >= 0`` stays the same."""
    return scale_to_integers([b] + [-x for x in a])


def _int_point(v) -> tuple:
    """``(numerators, den)`` with ``v = numerators / den`` over one denominator."""
    den = lcm(*(x.denominator for x in v)) if v else 1
    return [x.numerator * (den // x.denominator) for x in v], den


def _excess(a, b, pt):
    """A positive multiple of ``a.v - b`` for ``pt = _int_point(v)`` (only the sign matters)."""
    nums, den = pt
    s = sum(map(operator.mul, a, nums))
    if isinstance(b, int):
        return s - b * den
    return s * b.denominator - b.numerator * den


class Polyhedron:
    """A rational polyhedron in canonical double representation.

    Build instances with :meth:`from_constraints`, :meth:`from_generators`,
    :meth:`empty` or :meth:`universe`; the constructor itself trusts its
    arguments to already be canonical.
    """

    __slots__ = ("dim", "equalities", "inequalities", "vertices", "rays",
                 "lineality", "_edges", "_key")

    def __init__(self, dim, equalities, inequalities, vertices, rays, lineality):
        self.dim = dim
        self.equalities = tuple(equalities)
        self.inequalities = tuple(inequalities)
        self.vertices = tuple(vertices)
        self.rays = tuple(rays)
        self.lineality = tuple(lineality)
        self._edges = None
        self._key = (dim, self.equalities, self.inequalities)

    # -- construction -------------------------------------------------------

    @classmethod
    def empty(cls, dim: int) -> "Polyhedron":
        return cls(dim, (), (LinIneq((0,) * dim, Fraction(-1)),), (), (), ())

    @classmethod
    def universe(cls, dim: int) -> "Polyhedron":
        return cls.from_constraints(dim, ())

    @classmethod
    def from_constraints(cls, dim: int, inequalities: Iterable = (),
                         equalities: Iterable = ()) -> "Polyhedron":
        """Canonicalize ``{x : a.x <= b (ineqs), a.x = b (eqs)}``.

        Rows are ``(a, b)`` pairs (or :class:`LinIneq`) with rational entries.
        """
        ineqs = _clean_rows(dim, inequalities)
        eqs = _clean_rows(dim, equalities)
        for a, b in ineqs:
            if not any(a) and b < 0:
                return cls.empty(dim)
        for a, b in eqs:
            if not any(a) and b != 0:
                return cls.empty(dim)
        ineqs = sorted({r for r in ineqs if any(r[0])})
        eqs = sorted({r for r in eqs if any(r[0])})
        vertices, rays, lines = _h_to_v(dim, ineqs, eqs)
        if not vertices:
            return cls.empty(dim)
        heqs, hineqs = _v_to_h(dim, vertices, rays, lines)
        return cls(dim, heqs, hineqs, vertices, rays, lines)

    @classmethod
    def from_generators(cls, dim: int, vertices: Iterable = (), rays: Iterable = (),
                        lineality: Iterable = ()) -> "Polyhedron":
        """Canonical polyhedron ``conv(vertices) + cone(rays) + span(lineality)``.

        Generators need not be minimal.  No vertices means the empty set.
        """
        vs = sorted({tuple(frac(x) for x in v) for v in vertices})
        rs = sorted({tuple(scale_to_integers([frac(x) for x in r])) for r in rays} - {(0,) * dim})
        ls = sorted({tuple(scale_to_integers([frac(x) for x in l])) for l in lineality} - {(0,) * dim})
        for g in vs + rs + ls:
            if len(g) != dim:
                raise DimensionMismatch(f"generator {g} has length {len(g)}, expected {dim}")
        if not vs:
            return cls.empty(dim)
        heqs, hineqs = _v_to_h(dim, vs, rs, ls)
        if ls or rank([r.coeffs for r in heqs + hineqs]) < dim:
            mv, mr, ml = _h_to_v(dim, [tuple(r) for r in hineqs], [tuple(r) for r in heqs])
        else:
            mv, mr = _extreme_generators(dim, heqs, hineqs, vs, rs)
            ml = ()
        return cls(dim, heqs, hineqs, mv, mr, ml)

    # -- basic queries ------------------------------------------------------

    @property
    def hrep(self) -> HRep:
        return HRep(self.dim, self.inequalities, self.equalities)

    @property
    def vrep(self) -> VRep:
        return VRep(self.vertices, self.rays, self.lineality)

    def is_empty(self) -> bool:
        return not self.vertices

    def is_bounded(self) -> bool:
        return not self.rays and not self.lineality

    def is_cone(self) -> bool:
        return self.vertices == ((Fraction(0),) * self.dim,)

    def affine_dim(self) -> int:
        if self.is_empty():
            return -1
        return self.dim - len(self.equalities)

    def __eq__(self, other):
        if not isinstance(other, Polyhedron):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        if self.is_empty():
            return f"Polyhedron(dim={self.dim}, empty)"
        return (f"Polyhedron(dim={self.dim}, eqs={len(self.equalities)}, "
                f"ineqs={len(self.inequalities)}, vertices={len(self.vertices)}, "
                f"rays={len(self.rays)}, lineality={len(self.lineality)})")

    def contains(self, x: Sequence) -> bool:
        x = [frac(v) for v in x]
        if len(x) != self.dim:
            raise DimensionMismatch("point has wrong length")
        if self.is_empty():
            return False
        pt = _int_point(x)
        return (all(_excess(r.coeffs, r.rhs, pt) == 0 for r in self.equalities)
                and all(_excess(r.coeffs, r.rhs, pt) <= 0 for r in self.inequalities))

    def _satisfies(self, rows_eq, rows_le) -> bool:
        for v in self.vertices:
            pt = _int_point(v)
            for a, b in rows_eq:
                if _excess(a, b, pt) != 0:
                    return False
            for a, b in rows_le:
                if _excess(a, b, pt) > 0:
                    return False
        for r in self.rays:
            for a, _ in rows_eq:
                if dot(a, r) != 0:
                    return False
            for a, _ in rows_le:
                if dot(a, r) > 0:
                    return False
        for l in self.lineality:
            for a, _ in list(rows_eq) + list(rows_le):
                if dot(a, l) != 0:
                    return False
        return True

    def is_subset(self, other: "Polyhedron") -> bool:
        _same_dim(self, other)
        if self.is_empty():
            return True
        if other.is_empty():
            return False
        return self._satisfies(other.equalities, other.inequalities)

    def satisfies(self, coeffs: Sequence, rhs) -> bool:
        """Whether ``coeffs . x <= rhs`` holds on the whole polyhedron."""
        return self.is_empty() or self._satisfies((), [(tuple(coeffs), frac(rhs))])

    def bounds(self, obj: Sequence):
        """``(min, max)`` of ``obj . x`` read off the generators.

        ``None`` stands for an infinite side.  Raises on the empty set.
        """
        if self.is_empty():
            raise EmptyPolyhedron("bounds of an empty polyhedron")
        obj = [frac(x) for x in obj]
        vals = [dot(obj, v) for v in self.vertices]
        lo, hi = min(vals), max(vals)
        for l in self.lineality:
            if dot(obj, l) != 0:
                return None, None
        for r in self.rays:
            s = dot(obj, r)
            if s > 0:
                hi = None
            elif s < 0:
                lo = None
        return lo, hi

    def edges(self) -> tuple:
        """Index pairs of vertices joined by a bounded edge."""
        if self._edges is None:
            self._edges = tuple(_edges(self))
        return self._edges


def _same_dim(P, Q):
    if P.dim != Q.dim:
        raise DimensionMismatch(f"dimensions differ: {P.dim} vs {Q.dim}")


def _clean_rows(dim, rows):
    out = []
    for row in rows:
        a, b = row
        if len(a) != dim:
            raise DimensionMismatch(f"row of length {len(a)} in dimension {dim}")
        out.append((tuple(frac(x) for x in a), frac(b)))
    return out


def _h_to_v(dim, ineqs, eqs):
    """Minimal canonical generators of ``{A x <= b, E x = e}`` (nonempty or not)."""
    xrows = [a for a, _ in ineqs] + [a for a, _ in eqs]
    lines = canonical_subspace_basis(nullspace(xrows, dim), dim) if xrows else \
        [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    cone_eqs = [_homog(e, a) for a, e in eqs] + [[0] + list(l) for l in lines]
    cone_ineqs = [[1] + [0] * dim] + [_homog(b, a) for a, b in ineqs]
    lin, gens = kernel.dd_cone(dim + 1, cone_eqs, cone_ineqs)
    if lin:
        raise AssertionError("homogenized cone is not pointed")
    vertices, rays = [], []
    for g in gens:
        t = g[0]
        if t > 0:
            vertices.append(tuple(Fraction(x, t) for x in g[1:]))
        else:
            rays.append(tuple(g[1:]))
    return sorted(vertices), sorted(rays), tuple(lines)


def _extreme_generators(dim, eqs, ineqs, vertices, rays):
    """Vertices and extreme rays among the generators of a pointed polyhedron.

    A point is a vertex when its tight rows have rank ``dim``; a ray is
    extreme when its tight rows have rank ``dim - 1``.
    """
    eq_rows = [r.coeffs for r in eqs]
    out_v = []
    for v in vertices:
        pt = _int_point(v)
        tight = eq_rows + [r.coeffs for r in ineqs if _excess(r.coeffs, r.rhs, pt) == 0]
        if len(tight) >= dim and rank(tight) == dim:
            out_v.append(v)
    out_r = set()
    for ray in rays:
        tight = eq_rows + [r.coeffs for r in ineqs if dot(r.coeffs, ray) == 0]
        if rank(tight) == dim - 1:
            out_r.add(tuple(int_primitive(ray)))
    return sorted(out_v), sorted(out_r)


def _v_to_h(dim, vertices, rays, lines):
    """Canonical ``(equalities, inequalities)`` of a nonempty generated set.

    Works on the polar cone ``{(beta, a) : a.v <= beta, a.r <= 0, a.l = 0}``:
    its lineality gives the equalities, its extreme rays tight at some vertex
    give the facets.
    """
    vrows = sorted({tuple(_homog(1, v)) for v in vertices})
    rrows = sorted({tuple([0] + [-x for x in r]) for r in rays})
    lrows = [[0] + list(l) for l in lines]
    allrows = [list(r) for r in vrows] + [list(r) for r in rrows] + lrows
    pol_lin = nullspace(allrows, dim + 1)
    # equalities a.x = beta
    eq_rows = [(tuple(p[1:]), Fraction(p[0])) for p in pol_lin]
    if eq_rows:
        R, pivots = rref([list(a) + [b] for a, b in eq_rows], dim + 1)
        if dim in pivots:
            raise AssertionError("inconsistent affine hull for a nonempty set")
        ech = [(row[:dim], row[dim], p) for row, p in zip(R, pivots)]
    else:
        ech = []
    equalities = sorted(_scale_row(a, b) for a, b, _ in ech)
    cone_eqs = lrows + [list(p) for p in pol_lin]
    lin, gens = kernel.dd_cone(dim + 1, cone_eqs, [list(r) for r in vrows] + [list(r) for r in rrows])
    if lin:
        raise AssertionError("polar cone is not pointed")
    ineqs = set()
    for g in gens:
        if not any(dot(v, g) == 0 for v in vrows):
            continue  # the trivial direction 0.x <= 1
        beta = Fraction(g[0])
        a = [Fraction(x) for x in g[1:]]
        # reduce modulo the equalities (row echelon has 1 at each pivot)
        for e_a, e_b, p in ech:
            f = a[p]
            if f:
                a = [x - f * y for x, y in zip(a, e_a)]
                beta -= f * e_b
        if not any(a):
            continue
        ineqs.add(_scale_row(a, beta))
    return tuple(equalities), tuple(sorted(ineqs))


def _edges(P: Polyhedron):
    if len(P.vertices) < 2:
        return []
    rows = P.inequalities
    masks = []
    for v in P.vertices:
        m = 0
        pt = _int_point(v)
        for i, (a, b) in enumerate(rows):
            if _excess(a, b, pt) == 0:
                m |= 1 << i
        masks.append(m)
    for r in P.rays:
        m = 0
        for i, (a, _) in enumerate(rows):
            if dot(a, r) == 0:
                m |= 1 << i
        masks.append(m)
    nv = len(P.vertices)
    min_common = P.affine_dim() - len(P.lineality) - 1
    idx = list(range(nv))
    return kernel.adjacent_pairs(masks, idx, idx, max(min_common, 0), True)


# ---------------------------------------------------------------------------
# set operations


def canonicalize(raw: Iterable, dim: int, equalities: Iterable = ()) -> Polyhedron:
    """Canonical polyhedron of a raw list of ``(a, b)`` rows meaning ``a.x <= b``."""
    return Polyhedron.from_constraints(dim, raw, equalities)


def dd_convert(P: Polyhedron) -> VRep:
    return P.vrep


def vrep_to_hrep(dim: int, vrep: VRep) -> HRep:
    return Polyhedron.from_generators(dim, vrep.vertices, vrep.rays, vrep.lineality).hrep


def intersect(P: Polyhedron, Q: Polyhedron) -> Polyhedron:
    _same_dim(P, Q)
    if P.is_empty():
        return P
    if Q.is_empty():
        return Q
    if P.is_subset(Q):
        return P
    if Q.is_subset(P):
        return Q
    return Polyhedron.from_constraints(
        P.dim, P.inequalities + Q.inequalities, P.equalities + Q.equalities)


def intersect_all(polys: Sequence[Polyhedron], dim: int | None = None) -> Polyhedron:
    polys = list(polys)
    if not polys:
        if dim is None:
            raise ValueError("dimension required for an empty intersection")
        return Polyhedron.universe(dim)
    if any(p.is_empty() for p in polys):
        return Polyhedron.empty(polys[0].dim)
    ineqs, eqs = [], []
    for p in polys:
        _same_dim(polys[0], p)
        ineqs.extend(p.inequalities)
        eqs.extend(p.equalities)
    return Polyhedron.from_constraints(polys[0].dim, ineqs, eqs)


def add_constraints(P: Polyhedron, inequalities=(), equalities=()) -> Polyhedron:
    if P.is_empty():
        return P
    return Polyhedron.from_constraints(
        P.dim, tuple(P.inequalities) + tuple(inequalities),
        tuple(P.equalities) + tuple(equalities))


def conv_union(P: Polyhedron, Q: Polyhedron) -> Polyhedron:
    """Closed convex hull of ``P ∪ Q`` from the merged generators."""
    _same_dim(P, Q)
    if P.is_empty():
        return Q
    if Q.is_empty():
        return P
    return Polyhedron.from_generators(
        P.dim, P.vertices + Q.vertices, P.rays + Q.rays, P.lineality + Q.lineality)


def recession_cone(P: Polyhedron) -> Polyhedron:
    """``{x : A x <= 0, E x = 0}`` for ``P = {A x <= b, E x = e}``."""
    if P.is_empty():
        raise EmptyPolyhedron("recession cone of the empty set")
    return Polyhedron.from_constraints(
        P.dim, [(r.coeffs, 0) for r in P.inequalities], [(r.coeffs, 0) for r in P.equalities])


def relate(P: Polyhedron, Q: Polyhedron) -> Relation:
    _same_dim(P, Q)
    if P == Q:
        return Relation.EQUAL
    pq, qp = P.is_subset(Q), Q.is_subset(P)
    if pq:
        return Relation.SUBSET_STRICT
    if qp:
        return Relation.SUPERSET_STRICT
    return Relation.INCOMPARABLE


def contains(P: Polyhedron, x: Sequence) -> bool:
    return P.contains(x)


def exposed_face_normals(K: Polyhedron, c: Sequence):
    """Face ``F = {x in K : c.x = 0}`` of a cone and normals cutting it out.

    Returns ``(F, G, k)`` where ``G`` holds ``k = n - dim F`` linearly
    independent rows valid on ``K`` (``g.x <= 0``) with ``F = K ∩ {G x = 0}``.
    ``G`` is picked greedily from the rows of ``K``'s canonical H-rep that are
    tight on ``F``: equalities first (``+a`` then ``-a``), then inequalities.
    For ``K = {0}`` the standard basis is returned.
    """
    n = K.dim
    c = tuple(frac(x) for x in c)
    if len(c) != n:
        raise DimensionMismatch("objective has wrong length")
    if K.is_empty() or not K.is_cone():
        raise InvalidObjective("exposed_face_normals expects a nonempty cone")
    if not K.satisfies(c, 0):
        raise InvalidObjective(f"{c} . x <= 0 is not valid on the cone")
    F = add_constraints(K, equalities=[(c, 0)]) if any(c) else K
    k = n - F.affine_dim()
    if K.is_bounded():
        G = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        return F, G, n
    candidates = []
    for r in K.equalities:
        candidates.append(tuple(r.coeffs))
        candidates.append(tuple(-x for x in r.coeffs))
    candidates.extend(tuple(r.coeffs) for r in K.inequalities)
    F_gens = list(F.rays) + list(F.lineality)
    G = []
    for g in candidates:
        if len(G) == k:
            break
        if any(dot(g, x) != 0 for x in F_gens):
            continue
        if rank(G + [g]) == len(G) + 1:
            G.append(g)
    if len(G) != k:
        raise AssertionError("tight rows of the face do not have full rank")
    return F, G, k
