"""Integer hulls and the integral facet system of a rational polyhedron."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NonIntegralOffset, UnboundedInput
from .lp import LPStatus, solve_lp
from .numerics import dot
from .polyhedron import Polyhedron


@dataclass(frozen=True)
class FacetInequality:
    """One row ``c . x <= alpha`` of the integral system defining the hull."""

    c: tuple
    alpha: int


@dataclass(frozen=True)
class FacetSystem:
    """Integral ``C x <= a`` describing the hull, with ``b >= a`` valid on ``Q``."""

    C: tuple
    a: tuple
    b: tuple

    def rows(self):
        return [FacetInequality(c, a) for c, a in zip(self.C, self.a)]


def _projection(P: Polyhedron, k: int) -> Polyhedron:
    return Polyhedron.from_generators(k, [v[:k] for v in P.vertices])


def _coordinate_range(proj: Polyhedron, prefix):
    """Integer range of the last coordinate of ``proj`` above ``prefix``."""
    lo, hi = None, None
    for r in proj.equalities:
        a = r.coeffs[-1]
        rest = r.rhs - dot(r.coeffs[:-1], prefix)
        if a == 0:
            if rest != 0:
                return range(0)
            continue
        val = rest / a
        if val.denominator != 1:
            return range(0)
        lo = val if lo is None else max(lo, val)
        hi = val if hi is None else min(hi, val)
    for r in proj.inequalities:
        a = r.coeffs[-1]
        rest = r.rhs - dot(r.coeffs[:-1], prefix)
        if a > 0:
            bound = rest / a
            hi = bound if hi is None else min(hi, bound)
        elif a < 0:
            bound = rest / a
            lo = bound if lo is None else max(lo, bound)
        elif rest < 0:
            return range(0)
    return range(math.ceil(lo), math.floor(hi) + 1)


def lattice_points(P: Polyhedron) -> list:
    """All integral points of a bounded polyhedron, lexicographically sorted.

    Coordinates are fixed left to right; the admissible range of each new
    coordinate is read exactly off the projection of ``P`` onto the leading
    coordinates, so every range is the true LP range for the fixed prefix.
    """
    if P.is_empty():
        return []
    if not P.is_bounded():
        raise UnboundedInput("lattice_points needs a bounded polyhedron")
    n = P.dim
    projections = [_projection(P, k) for k in range(1, n)] + [P]
    points = []

    def extend(prefix):
        k = len(prefix)
        for x in _coordinate_range(projections[k], prefix):
            nxt = prefix + (x,)
            if k + 1 == n:
                points.append(nxt)
            else:
                extend(nxt)

    extend(())
    return points


def _fundamental_box(P: Polyhedron) -> Polyhedron:
    """``conv(vertices) + sum [0, 1] r`` over the ray and ±lineality generators."""
    gens = list(P.rays) + list(P.lineality) + [tuple(-x for x in l) for l in P.lineality]
    pts = list(P.vertices)
    box = Polyhedron.from_generators(P.dim, pts)
    for r in gens:
        pts = list(box.vertices) + [tuple(x + y for x, y in zip(v, r)) for v in box.vertices]
        box = Polyhedron.from_generators(P.dim, pts)
    return box


def integer_hull(Q: Polyhedron) -> Polyhedron:
    """``conv(Q ∩ Z^n)``.

    Bounded inputs: hull of the enumerated lattice points.  Unbounded inputs:
    ``conv(B ∩ Z^n) + rec(Q)`` where ``B`` is the polytope spanned by the
    vertices plus the unit box of the primitive recession generators; every
    integral point of ``Q`` is a point of ``B ∩ Z^n`` plus a nonnegative
    integer combination of those generators.
    """
    if Q.is_empty():
        return Q
    if Q.is_bounded():
        pts = lattice_points(Q)
        return Polyhedron.from_generators(Q.dim, pts)
    pts = lattice_points(_fundamental_box(Q))
    if not pts:
        return Polyhedron.empty(Q.dim)
    return Polyhedron.from_generators(Q.dim, pts, Q.rays, Q.lineality)


def facet_system(Q: Polyhedron, P: Polyhedron | None = None) -> FacetSystem:
    """Integral ``(C, a, b)``: ``{C x <= a}`` is the hull, ``Q ⊆ {C x <= b}``.

    Equalities of the hull enter as two opposite rows.  For an empty hull the
    system is the single zero row with ``a = -1`` and ``b = 0``.
    """
    if P is None:
        P = integer_hull(Q)
    n = Q.dim
    if P.is_empty():
        return FacetSystem(((0,) * n,), (-1,), (0,))
    rows = []
    for r in P.equalities:
        rows.append((tuple(r.coeffs), r.rhs))
        rows.append((tuple(-x for x in r.coeffs), -r.rhs))
    rows.extend((tuple(r.coeffs), r.rhs) for r in P.inequalities)
    C, a, b = [], [], []
    for c, alpha in rows:
        if alpha.denominator != 1:
            raise NonIntegralOffset(f"facet {c} has offset {alpha}")
        res = solve_lp(Q, c, "max")
        if res.status is not LPStatus.OPTIMAL:
            raise AssertionError(f"row {c} is unbounded on Q; recession cones differ")
        C.append(c)
        a.append(int(alpha))
        b.append(max(int(alpha), math.ceil(res.value)))
    return FacetSystem(tuple(C), tuple(a), tuple(b))
