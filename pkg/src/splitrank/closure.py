"""Split and Chvátal closures over finite direction sets.

``direction_closure(Q, d)`` is ``conv(Q ∩ {x : d.x ∈ Z})``.  When the range of
``d.x`` over ``Q`` is bounded, ``d`` is orthogonal to the recession cone and
the slices ``Q ∩ {d.x = δ}`` are spanned by points of the edges of ``Q``.  On
an edge ``[u, v]`` only the two outermost integral slices matter, the inner
ones lie on the segment between them, so the closure is the hull of those
points (plus vertices already on an integral slice) and ``rec(Q)``.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import CapExceeded, UnboundedDirectionRange
from .hull import integer_hull
from .numerics import dot, primitive_vector, to_int_vector
from .polyhedron import Polyhedron, add_constraints, conv_union, intersect

log = logging.getLogger(__name__)


class DirectionList(tuple):
    """Canonical finite set of integral directions.

    Nonzero entries are made primitive and sign-normalized (first nonzero
    entry positive); both changes leave ``{x : d.x ∈ Z}`` unchanged or
    shrink it, so the closure can only get stronger.  Duplicates are dropped
    and the result is sorted.  The zero vector is kept if given.
    """

    def __new__(cls, directions: Iterable = (), dim: int | None = None):
        out = set()
        for d in directions:
            d = to_int_vector(d)
            if dim is not None and len(d) != dim:
                raise ValueError(f"direction {d} does not have length {dim}")
            if any(d):
                d = primitive_vector(d)
                if next(x for x in d if x) < 0:
                    d = tuple(-x for x in d)
            out.add(d)
        self = super().__new__(cls, sorted(out))
        self.dim = dim if dim is not None else (len(self[0]) if self else None)
        return self


def direction_range(Q: Polyhedron, d: Sequence):
    """Exact ``(min, max)`` of ``d.x`` over ``Q``; raises when a side is infinite."""
    lo, hi = Q.bounds(d)
    if lo is None:
        raise UnboundedDirectionRange(d, "min")
    if hi is None:
        raise UnboundedDirectionRange(d, "max")
    return lo, hi


def _check_direction(Q: Polyhedron, d) -> tuple:
    d = tuple(int(x) for x in to_int_vector(d))
    if len(d) != Q.dim:
        raise ValueError(f"direction {d} does not match dimension {Q.dim}")
    return d


def direction_closure(Q: Polyhedron, d: Sequence) -> Polyhedron:
    """``conv(Q ∩ {x : d.x ∈ Z})`` for an integral direction ``d``."""
    d = _check_direction(Q, d)
    if Q.is_empty() or not any(d):
        return Q
    lo, hi = direction_range(Q, d)
    if math.ceil(lo) > math.floor(hi):
        return Polyhedron.empty(Q.dim)
    vals = [dot(d, v) for v in Q.vertices]
    if all(v.denominator == 1 for v in vals):
        return Q
    points = set()
    for v, val in zip(Q.vertices, vals):
        if val.denominator == 1:
            points.add(v)
    for i, j in Q.edges():
        a, b = vals[i], vals[j]
        if a == b:
            continue
        u, v = Q.vertices[i], Q.vertices[j]
        if a > b:
            a, b, u, v = b, a, v, u
        first, last = math.ceil(a), math.floor(b)
        if first > last:
            continue
        for delta in {first, last}:
            t = (delta - a) / (b - a)
            points.add(tuple(x + t * (y - x) for x, y in zip(u, v)))
    return Polyhedron.from_generators(Q.dim, points, Q.rays, Q.lineality)


def split_cut(Q: Polyhedron, d: Sequence, delta: int) -> Polyhedron:
    """``conv((Q ∩ {d.x <= δ}) ∪ (Q ∩ {d.x >= δ + 1}))``."""
    d = _check_direction(Q, d)
    if not any(d):
        raise ValueError("split_cut needs a nonzero direction")
    left = add_constraints(Q, [(d, delta)])
    right = add_constraints(Q, [(tuple(-x for x in d), -(delta + 1))])
    return conv_union(left, right)


def d_set_closure(Q: Polyhedron, D: Iterable) -> Polyhedron:
    """Intersection of the direction closures of ``Q`` over ``D``."""
    D = [_check_direction(Q, d) for d in D]
    if Q.is_empty():
        return Q
    for d in D:
        if any(d):
            direction_range(Q, d)
    result = Q
    for d in D:
        result = intersect(result, direction_closure(Q, d))
        if result.is_empty():
            break
    return result


def iterate_closure(Q: Polyhedron, D: Iterable, t: int) -> Polyhedron:
    """The ``t``-th iterate of the ``D``-closure (``t = 0`` returns ``Q``)."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    D = list(D)
    S = Q
    for _ in range(t):
        nxt = d_set_closure(S, D)
        if nxt == S:
            break
        S = nxt
    return S


def chvatal_closure(Q: Polyhedron, D: Iterable) -> Polyhedron:
    """``Q ∩ {d.x <= ⌊max_Q d.x⌋ : d ∈ D}``."""
    D = [_check_direction(Q, d) for d in D]
    if Q.is_empty():
        return Q
    cuts = []
    for d in D:
        _, hi = Q.bounds(d)
        if hi is None:
            raise UnboundedDirectionRange(d, "max")
        cuts.append((d, math.floor(hi)))
    return add_constraints(Q, cuts)


def bounded_directions(n: int, L: int) -> DirectionList:
    """Primitive integral vectors of ∞-norm at most ``L``, one per ± pair."""
    if L < 1:
        raise ValueError("L must be at least 1")
    dirs = []
    for v in itertools.product(range(-L, L + 1), repeat=n):
        if not any(v) or math.gcd(*v) != 1:
            continue
        if next(x for x in v if x) > 0:
            dirs.append(v)
    return DirectionList(dirs, n)


@dataclass
class Reached:
    """The bounded closure hit the integer hull after ``t`` rounds."""

    t: int
    skipped: dict = field(default_factory=dict)
    iterates: list = field(default_factory=list, repr=False)


def bounded_split_rank(Q: Polyhedron, L: int, cap: int = 100) -> Reached:
    """Rounds of the closure over ``bounded_directions(n, L)`` needed to reach the hull.

    Directions with an unbounded range on the current iterate are skipped
    (and recorded in ``skipped[t]``); dropping directions only weakens the
    closure, so ``Reached(t)`` still bounds the split rank by ``t``.
    Raises :class:`CapExceeded` with the last iterate attached.
    """
    D = bounded_directions(Q.dim, L)
    P = integer_hull(Q)
    S = Q
    iterates = [S]
    skipped = {}
    for t in range(cap + 1):
        if S == P:
            return Reached(t, skipped, iterates)
        if t == cap:
            break
        usable = []
        for d in D:
            if S.is_empty():
                break
            lo, hi = S.bounds(d)
            if lo is None or hi is None:
                skipped.setdefault(t, []).append(d)
            else:
                usable.append(d)
        if skipped.get(t):
            log.info("round %d: skipped %d unbounded directions", t, len(skipped[t]))
        S = d_set_closure(S, usable)
        iterates.append(S)
    raise CapExceeded(cap, S)
