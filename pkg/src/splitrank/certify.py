"""Finite split rank certificates, built facet by facet.

For a facet ``c.x <= alpha`` of the integer hull ``P`` of ``Q``:

1. take the face ``F = {x in rec(Q) : c.x = 0}`` and normals ``g_1..g_k``
   cutting it out of ``rec(Q)``;
2. pick a lattice basis ``w_1..w_n`` whose first ``k`` vectors lie in
   ``cone(g_1..g_k)``;
3. set ``M_i = max(0, ceil(-min{w_i.x : x in Q, c.x >= alpha}),
   ceil(max{w_i.x : x in Q}))`` and ``d_0 = c``,
   ``d_i = (2 M_i + 1) d_{i-1} + w_i``;
4. iterate the closure over ``{d_0..d_k}`` until ``c.x <= alpha`` holds.

Along the way the potentials ``u[t][d] = max{d.x : x in S^t}`` are recorded
and the two-step decrease property, the face inclusions at the stabilized
iterate and the integral point recovery are checked at run time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .closure import DirectionList, d_set_closure, iterate_closure
from .errors import (
    CapExceeded,
    InvalidFacet,
    InvalidObjective,
    NoSolution,
    NotStabilized,
    PointNotInQ,
    UnboundedBigM,
    Unverified,
)
from .hull import FacetInequality, facet_system, integer_hull
from .lp import LPStatus, in_cone, solve_lp
from .numerics import (
    basis_in_cone,
    canonical_subspace_basis,
    det,
    dot,
    extend_to_lattice_basis,
    frac,
    solve,
)
from .polyhedron import Polyhedron, add_constraints, exposed_face_normals, recession_cone

DEFAULT_CAP = 1000
DEFAULT_FIXPOINT_EXTRA = 6
DEFAULT_FIXPOINT_BITS = 1024


class AlreadyValid(Exception):
    """``{x in Q : c.x >= alpha}`` is empty: the facet needs no closure at all."""


@dataclass(frozen=True)
class RecessionFace:
    F: Polyhedron
    G: tuple
    k: int


@dataclass(frozen=True)
class DirectionSet:
    facet: FacetInequality
    face: RecessionFace | None
    W: tuple
    M: tuple
    d: tuple
    already_valid: bool = False

    @property
    def k(self) -> int:
        return len(self.M)


@dataclass
class ClosureTrace:
    """Potentials ``u[t][j] = max d_j.x`` over the ``t``-th iterate.

    ``empty_at`` is the first iterate that is empty (the table stops before
    it); ``fixpoint_at`` is the first ``t`` with ``S^{t+1} = S^t``.
    """

    directions: tuple
    u: list = field(default_factory=list)
    empty_at: int | None = None
    fixpoint_at: int | None = None
    iterates: list = field(default_factory=list, repr=False, compare=False)

    @property
    def T(self) -> int:
        return len(self.u) - 1

    def stabilized(self) -> bool:
        """Constant and integral over the last two rows for every direction."""
        if len(self.u) < 2:
            return False
        last, prev = self.u[-1], self.u[-2]
        return last == prev and all(Fraction(x).denominator == 1 for x in last)

    def gamma(self) -> tuple:
        if not self.stabilized():
            raise NotStabilized("trace has not stabilized")
        return tuple(int(x) for x in self.u[-1])

    def t_d(self) -> tuple:
        """First index from which each column stays at its final value."""
        gam = self.gamma()
        out = []
        for j, g in enumerate(gam):
            t = len(self.u) - 1
            while t > 0 and self.u[t - 1][j] == g:
                t -= 1
            out.append(t)
        return tuple(out)

    def t_D(self) -> int:
        return max(self.t_d(), default=0)

    def iterate(self, t: int, Q: Polyhedron | None = None) -> Polyhedron:
        if self.iterates:
            if t < len(self.iterates):
                return self.iterates[t]
            if self.fixpoint_at is not None or self.empty_at is not None:
                return self.iterates[-1]
        if Q is None:
            raise ValueError(f"iterate {t} not stored and no Q given")
        return iterate_closure(Q, self.directions, t)


@dataclass
class FacetCertificate:
    facet: FacetInequality
    directions: DirectionSet
    t_star: int
    trace: ClosureTrace
    status: str = "valid"
    reason: str | None = None
    claim3: bool | None = None
    recovered_point: tuple | None = None


@dataclass
class RankCertificate:
    per_facet: list
    T: int
    combined_D: DirectionList
    verified: bool
    name: str | None = None


# ---------------------------------------------------------------------------
# construction of the directions


def recession_face(Q: Polyhedron, facet: FacetInequality) -> RecessionFace:
    """Face of ``rec(Q)`` exposed by ``c`` together with its normals."""
    K = recession_cone(Q)
    try:
        F, G, k = exposed_face_normals(K, facet.c)
    except InvalidObjective as exc:
        raise InvalidFacet(str(exc)) from exc
    return RecessionFace(F, tuple(tuple(g) for g in G), k)


def _upper_region(Q: Polyhedron, facet: FacetInequality) -> Polyhedron:
    return add_constraints(Q, [(tuple(-x for x in facet.c), -facet.alpha)])


def big_m(Q: Polyhedron, facet: FacetInequality, w: Sequence, region=None) -> int:
    """``max(0, ceil(-min_{Q, c.x >= alpha} w.x), ceil(max_Q w.x))``."""
    if region is None:
        region = _upper_region(Q, facet)
    if region.is_empty():
        raise AlreadyValid(facet)
    low = solve_lp(region, w, "min")
    high = solve_lp(Q, w, "max")
    if low.status is not LPStatus.OPTIMAL or high.status is not LPStatus.OPTIMAL:
        raise UnboundedBigM(f"w = {tuple(w)} is unbounded for facet {facet}")
    return max(0, math.ceil(-low.value), math.ceil(high.value))


def _desc_lex(v):
    return tuple(-x for x in v)


def build_directions(Q: Polyhedron, facet: FacetInequality) -> DirectionSet:
    n = Q.dim
    region = _upper_region(Q, facet)
    if region.is_empty():
        return DirectionSet(facet, None, (), (), (), already_valid=True)
    face = recession_face(Q, facet)
    ws = sorted(basis_in_cone(face.G, n), key=_desc_lex) if face.k else []
    W = extend_to_lattice_basis(ws, n)
    M = tuple(big_m(Q, facet, w, region) for w in ws)
    d = [tuple(facet.c)]
    for Mi, w in zip(M, ws):
        d.append(tuple((2 * Mi + 1) * x + y for x, y in zip(d[-1], w)))
    return DirectionSet(facet, face, tuple(tuple(w) for w in W), M, tuple(d))


# ---------------------------------------------------------------------------
# potentials and run-time claim checks


def _u_row(S: Polyhedron, directions) -> tuple:
    """``max d.x`` over ``S`` for each direction, read off the exact generators.

    Iterates are kept in double representation, so the vertex maximum is the
    LP optimum; an improving ray or line means the direction set lost
    the finiteness it was built to have.
    """
    row = []
    for d in directions:
        _, hi = S.bounds(d)
        if hi is None:
            raise AssertionError(f"potential for {d} is unbounded")
        row.append(hi)
    return tuple(row)


def trace_bounds(Q: Polyhedron, D, T: int) -> ClosureTrace:
    """Potentials over iterates ``0..T`` (stopping early at an empty iterate)."""
    dirs = tuple(D.d if isinstance(D, DirectionSet) else D)
    trace = ClosureTrace(dirs)
    S = Q
    for t in range(T + 1):
        if t > 0:
            nxt = d_set_closure(S, dirs)
            if nxt == S and trace.fixpoint_at is None:
                trace.fixpoint_at = t - 1
            S = nxt
        if S.is_empty():
            trace.empty_at = t
            break
        trace.iterates.append(S)
        trace.u.append(_u_row(S, dirs))
    return trace


def verify_claim2(trace: ClosureTrace) -> bool:
    """Monotone potentials, and every strict drop becomes a unit drop within two steps.

    At ``t = 0`` the second alternative refers to a row before ``Q``; it is
    treated as unbounded, so only integral start values are checked there.
    """
    u = trace.u
    T = len(u) - 1
    ncol = len(trace.directions)
    for j in range(ncol):
        for t in range(T):
            if u[t + 1][j] > u[t][j]:
                return False
        for t in range(T):
            if not u[t + 1][j] < u[t][j]:
                continue
            if t + 2 > T:
                continue
            first = u[t + 2][j] <= u[t][j] - 1
            if t == 0:
                # nothing precedes Q, so a fractional start value only
                # promises the drop through the missing earlier row
                ok = first or Fraction(u[0][j]).denominator != 1
            else:
                ok = first or u[t + 1][j] <= u[t - 1][j] - 1
            if not ok:
                return False
    return True


def verify_claim3(Q: Polyhedron, D: DirectionSet, trace: ClosureTrace) -> bool:
    """Face inclusions ``{d_i.x = γ_i} ⊆ {d_{i-1}.x = γ_{i-1}}`` at iterate ``t_D + 1``.

    Vacuously true once an iterate is empty.
    """
    if trace.empty_at is not None:
        return True
    if not trace.stabilized():
        raise NotStabilized("potentials have not stabilized within the run")
    gam = trace.gamma()
    S = trace.iterate(trace.t_D() + 1, Q)
    for i in range(1, len(D.d)):
        cut = add_constraints(S, equalities=[(D.d[i], gam[i])])
        if cut.is_empty():
            return False
        hi = solve_lp(cut, D.d[i - 1], "max")
        lo = solve_lp(cut, D.d[i - 1], "min")
        if not (hi.optimal and lo.optimal and hi.value == gam[i - 1] == lo.value):
            return False
    return True


def recover_integral_point(x_star: Sequence, W: Sequence, F: Polyhedron, Q: Polyhedron) -> tuple:
    """Shift ``x_star`` inside the face ``F`` of ``rec(Q)`` onto ``Z^n``.

    Needs ``w_i.x_star`` integral for the first ``k = n - dim F`` rows of the
    lattice basis ``W``; solves ``w_i.(x_star + r)`` integral for the others
    with ``r`` in ``F``.
    """
    x_star = tuple(frac(x) for x in x_star)
    n = len(x_star)
    k = n - F.affine_dim()
    for w in W[:k]:
        if dot(w, x_star).denominator != 1:
            raise ValueError(f"w = {w} is not integral at x_star")
    if k == n:
        r = (Fraction(0),) * n
    else:
        span = canonical_subspace_basis(list(F.rays) + list(F.lineality), n)
        rows = [[dot(w, b) for b in span] for w in W[k:]]
        target = [math.ceil(dot(w, x_star)) - dot(w, x_star) for w in W[k:]]
        mu = solve(rows, target)
        if mu is None:
            raise NoSolution("no shift in the span of F solves the integrality system")
        r = [sum((m * b[i] for m, b in zip(mu, span)), Fraction(0)) for i in range(n)]
        if F.rays and not F.contains(r):
            f = [sum(ray[i] for ray in F.rays) for i in range(n)]
            steps = 0
            for ineq in F.inequalities:
                af = dot(ineq.coeffs, f)
                ar = dot(ineq.coeffs, r)
                if ar > 0:
                    if af >= 0:
                        raise NoSolution("face has no interior direction to shift along")
                    steps = max(steps, math.ceil(ar / -af))
            r = [x + steps * y for x, y in zip(r, f)]
        if not F.contains(r):
            raise NoSolution("shift left the face F")
    x = tuple(a + b for a, b in zip(x_star, r))
    if any(v.denominator != 1 for v in x):
        raise NoSolution(f"recovered point {x} is not integral")
    if not Q.contains(x):
        raise PointNotInQ(f"recovered point {x} is not in Q")
    return tuple(int(v) for v in x)


def verify_claim4(Q: Polyhedron, D: DirectionSet, trace: ClosureTrace):
    """Integral point of ``Q`` on ``c.x = γ_c`` recovered from the stabilized iterate."""
    gam = trace.gamma()
    S = trace.iterate(trace.t_D() + 1, Q)
    res = solve_lp(S, D.d[-1], "max")
    x_star = res.witness
    point = recover_integral_point(x_star, D.W, D.face.F, Q)
    if dot(D.facet.c, point) != gam[0]:
        raise NoSolution(f"recovered point {point} misses c.x = {gam[0]}")
    return point


# ---------------------------------------------------------------------------
# certificates


def _valid(S: Polyhedron, facet: FacetInequality) -> bool:
    # checked on the generators: the iterates carry huge exact H-rows, and a
    # simplex over them costs far more than a pass over the vertices
    return S.satisfies(facet.c, facet.alpha)


def _coordinate_bits(S: Polyhedron) -> int:
    """Largest numerator or denominator bit length among the generators of ``S``."""
    bits = 0
    for v in S.vertices + S.rays:
        for x in v:
            x = Fraction(x)
            bits = max(bits, x.numerator.bit_length(), x.denominator.bit_length())
    return bits


def certify_facet(Q: Polyhedron, facet: FacetInequality, cap: int = DEFAULT_CAP,
                  fixpoint_extra: int = DEFAULT_FIXPOINT_EXTRA,
                  fixpoint_bits: int = DEFAULT_FIXPOINT_BITS) -> FacetCertificate:
    """Iterate the facet's closure until ``c.x <= alpha`` holds.

    Afterwards up to ``fixpoint_extra`` further rounds look for a closure
    fixpoint; when one is found the face inclusions and the integral point
    recovery are checked on it, otherwise ``claim3`` stays ``None``.  The
    directions of large norm can take many rounds to settle, and the exact
    coordinates of the iterates roughly double in size per round, so this
    search is bounded separately from ``cap``: it also stops once a
    coordinate needs more than ``fixpoint_bits`` bits.
    """
    D = build_directions(Q, facet)
    dirs = D.d
    trace = ClosureTrace(dirs)
    S = Q
    trace.iterates.append(S)
    trace.u.append(_u_row(S, dirs))
    t = 0
    while not _valid(S, facet):
        if t >= cap:
            raise CapExceeded(cap, trace, f"facet {facet.c} <= {facet.alpha}: cap {cap} exceeded")
        nxt = d_set_closure(S, dirs)
        t += 1
        if nxt == S:
            raise Unverified(f"closure stalled at t={t - 1} with the facet still violated")
        S = nxt
        if S.is_empty():
            trace.empty_at = t
            break
        trace.iterates.append(S)
        trace.u.append(_u_row(S, dirs))
    t_star = t
    if trace.empty_at is None:
        limit = min(cap, t + fixpoint_extra)
        while t <= limit and _coordinate_bits(S) <= fixpoint_bits:
            nxt = d_set_closure(S, dirs)
            if nxt == S:
                trace.fixpoint_at = t
                # the repeated row makes the stabilization visible in the table
                trace.iterates.append(S)
                trace.u.append(trace.u[-1])
                break
            t += 1
            S = nxt
            if S.is_empty():
                trace.empty_at = t
                break
            trace.iterates.append(S)
            trace.u.append(_u_row(S, dirs))
    if not verify_claim2(trace):
        raise Unverified(f"potential trace violates the two-step decrease: {trace.u}")
    cert = FacetCertificate(facet, D, t_star, trace)
    if D.already_valid:
        cert.status = "degenerate"
        cert.reason = "already valid on Q"
    elif not any(facet.c):
        cert.status = "degenerate"
        cert.reason = "empty integer hull"
    if D.already_valid:
        return cert
    if trace.empty_at is not None:
        cert.claim3 = True
    elif trace.fixpoint_at is not None:
        cert.claim3 = verify_claim3(Q, D, trace)
        if cert.claim3:
            cert.recovered_point = verify_claim4(Q, D, trace)
    return cert


def certify(Q: Polyhedron, cap: int = DEFAULT_CAP, fixpoint_extra: int = DEFAULT_FIXPOINT_EXTRA,
            name: str | None = None, fixpoint_bits: int = DEFAULT_FIXPOINT_BITS) -> RankCertificate:
    """Certificate that the split rank of ``Q`` is at most ``T``.

    One facet certificate per row of the facet system; the union of their
    directions, iterated ``T = max t*`` times, must reproduce the hull.
    """
    P = integer_hull(Q)
    system = facet_system(Q, P)
    per_facet = [certify_facet(Q, f, cap, fixpoint_extra, fixpoint_bits) for f in system.rows()]
    combined = DirectionList((d for fc in per_facet for d in fc.directions.d), Q.dim)
    T = max((fc.t_star for fc in per_facet), default=0)
    final = iterate_closure(Q, combined, T)
    if final != P:
        raise Unverified(f"combined closure after T={T} rounds differs from the integer hull")
    return RankCertificate(per_facet, T, combined, True, name)


# ---------------------------------------------------------------------------
# independent re-verification


def _replay(Q: Polyhedron, dirs, facet: FacetInequality, horizon: int, rows: int):
    """One pass over iterates ``0..horizon``: potentials for the first ``rows``
    of them and the validity of ``c.x <= alpha`` at each."""
    trace = ClosureTrace(tuple(dirs))
    valid_at = []
    S = Q
    for t in range(horizon + 1):
        if t > 0:
            nxt = d_set_closure(S, dirs)
            if nxt == S and trace.fixpoint_at is None:
                trace.fixpoint_at = t - 1
            S = nxt
        if S.is_empty():
            if trace.empty_at is None and t < rows:
                trace.empty_at = t
            valid_at.extend([True] * (horizon + 1 - t))
            break
        if t < rows:
            trace.u.append(_u_row(S, dirs))
        valid_at.append(_valid(S, facet))
    return trace, valid_at


def check_certificate(Q: Polyhedron, cert: dict) -> str | None:
    """Re-derive every claim of a serialized certificate from ``Q`` alone.

    ``cert`` uses plain Python values (ints, Fractions, tuples) as produced by
    :func:`splitrank.io.certificate_from_json`.  Returns ``None`` when all
    checks pass, otherwise a message naming the first failing claim.
    """
    n = Q.dim
    P = integer_hull(Q)
    system = facet_system(Q, P)
    facets = cert["facets"]
    if facets:
        expected = [(tuple(c), a) for c, a in zip(system.C, system.a)]
        got = [(tuple(f["c"]), f["alpha"]) for f in facets]
        if sorted(got) != sorted(expected):
            return "facet list does not match the integral facet system of the hull"
    for j, f in enumerate(facets, start=1):
        facet = FacetInequality(tuple(f["c"]), f["alpha"])
        d, M, W = [tuple(x) for x in f["d"]], tuple(f["M"]), [tuple(w) for w in f["W"]]
        if d:
            if d[0] != facet.c:
                return f"facet {j}: d_0 differs from c"
            if len(d) != len(M) + 1:
                return f"facet {j}: expected {len(M) + 1} directions, got {len(d)}"
            if W and (len(W) != n or abs(det(W)) != 1):
                return f"facet {j}: W is not a lattice basis"
            for i in range(1, len(d)):
                want = tuple((2 * M[i - 1] + 1) * x + y for x, y in zip(d[i - 1], W[i - 1]))
                if d[i] != want:
                    return f"facet {j}: d_{i} != (2 M_{i} + 1) d_{i - 1} + w_{i}"
            if M:
                face = recession_face(Q, facet)
                region = _upper_region(Q, facet)
                for i, w in enumerate(W[:len(M)], start=1):
                    if not in_cone(w, face.G):
                        return f"facet {j}: w_{i} is not in cone(G)"
                    if big_m(Q, facet, w, region) != M[i - 1]:
                        return f"facet {j}: M_{i} does not match its LP value"
                for x in list(face.F.rays) + list(face.F.lineality):
                    if any(dot(w, x) != 0 for w in W[:len(M)]):
                        return f"facet {j}: w_i not orthogonal to the face F"
        elif not _upper_region(Q, facet).is_empty():
            return f"facet {j}: no directions but c.x >= alpha meets Q"
        t_star = f["t_star"]
        u = [tuple(r) for r in (f.get("trace") or [])]
        recomputed, valid_at = _replay(Q, d, facet, max(t_star, len(u) - 1), len(u))
        if not valid_at[t_star]:
            return f"facet {j}: cx ≤ α not valid at t={t_star}"
        if t_star >= 1 and valid_at[t_star - 1]:
            return f"facet {j}: cx ≤ α already valid at t={t_star - 1}"
        if u:
            if u != recomputed.u:
                return f"facet {j}: potential table does not match recomputation"
            if not verify_claim2(recomputed):
                return f"facet {j}: potential table violates the two-step decrease"
    T = cert["T"]
    if facets and T != max(f["t_star"] for f in facets):
        return "T is not the largest facet iteration count"
    combined = DirectionList([tuple(x) for x in cert["combined_directions"]], n)
    if facets:
        union = DirectionList((tuple(x) for f in facets for x in f["d"]), n)
        if union != combined:
            return "combined directions are not the union of the facet directions"
    if iterate_closure(Q, combined, T) != P:
        return f"combined closure after T={T} rounds is not the integer hull"
    if not cert.get("verified", False):
        return "certificate is not marked verified"
    return None
