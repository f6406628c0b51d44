"""Exact rational linear algebra and integral lattice routines.

Scalars are :class:`fractions.Fraction` (or plain ``int`` where the value is
known to be integral).  Vectors are tuples, matrices are tuples of row tuples.
Nothing here ever touches floating point.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import NotPrimitive, RankDeficient, ZeroVector

Rational = Fraction
RatVector = tuple
IntMatrix = tuple


def frac(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def vec(xs: Iterable) -> tuple:
    return tuple(frac(x) for x in xs)


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def is_integral(v: Sequence) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def to_int_vector(v: Sequence) -> tuple:
    if not is_integral(v):
        raise ValueError(f"vector {tuple(v)} is not integral")
    return tuple(int(x) for x in v)


def primitive_vector(v: Sequence) -> tuple:
    """Return the positive multiple of ``v`` that is integral with gcd 1."""
    v = [frac(x) for x in v]
    if not any(v):
        raise ZeroVector("primitive_vector of the zero vector")
    den = lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = gcd(*ints)
    return tuple(x // g for x in ints)


def int_primitive(v: Sequence[int]) -> list:
    """gcd-normalize an integer vector in place-style; zero stays zero."""
    g = gcd(*v)
    if g > 1:
        return [x // g for x in v]
    return list(v)


def scale_to_integers(v: Sequence) -> list:
    """Smallest positive multiple of a rational vector that is integral."""
    if not v:
        return []
    v = [frac(x) for x in v]
    den = lcm(*(x.denominator for x in v))
    return [x.numerator * (den // x.denominator) for x in v]


# ---------------------------------------------------------------------------
# rational elimination


def _int_rows(rows) -> list:
    """Each row scaled by a positive factor to integers (row space unchanged)."""
    out = []
    for r in rows:
        dens = [x.denominator for x in r if isinstance(x, Fraction) and x.denominator != 1]
        if dens:
            den = lcm(*dens)
            out.append([x.numerator * (den // x.denominator) if isinstance(x, Fraction)
                        else x * den for x in r])
        else:
            out.append([int(x) for x in r])
    return out


def int_echelon(rows: Sequence[Sequence], ncols: int | None = None):
    """Fraction-free Gauss-Jordan elimination.

    Returns ``(R, pivots)``: integer rows, each primitive with a positive
    pivot, zero in every other row's pivot column.  Dividing each row by its
    pivot entry gives the reduced row echelon form.
    """
    m = [r for r in _int_rows(rows) if any(r)]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        row = m[r]
        if row[c] < 0:
            row = [-x for x in row]
        g = gcd(*row)
        if g > 1:
            row = [x // g for x in row]
        m[r] = row
        pv = row[c]
        for i in range(len(m)):
            if i != r:
                f = m[i][c]
                if f:
                    new = [pv * x - f * y for x, y in zip(m[i], row)]
                    g = gcd(*new)
                    if g > 1:
                        new = [x // g for x in new]
                    m[i] = new
        pivots.append(c)
        r += 1
    return [tuple(row) for row in m[:r]], pivots


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form over the rationals.

    Returns ``(R, pivots)`` where ``R`` holds only the nonzero rows.
    """
    R, pivots = int_echelon(rows, ncols)
    out = []
    for row, p in zip(R, pivots):
        pv = row[p]
        out.append(tuple(Fraction(x, pv) for x in row))
    return out, pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(int_echelon(rows)[1])


def nullspace(rows: Sequence[Sequence], n: int) -> list:
    """Primitive integral basis of ``{x : row . x = 0 for every row}``.

    The basis is canonical: it is read off the reduced row echelon form, one
    vector per free column, in column order.
    """
    if not rows:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    R, pivots = int_echelon(rows, n)
    pivset = set(pivots)
    scale = lcm(*(row[p] for row, p in zip(R, pivots))) if R else 1
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        x = [0] * n
        x[f] = scale
        for row, p in zip(R, pivots):
            x[p] = -row[f] * (scale // row[p])
        basis.append(tuple(int_primitive(x)))
    return basis


def canonical_subspace_basis(vectors: Sequence[Sequence], n: int) -> list:
    """Canonical primitive integral basis of the span of ``vectors``."""
    vectors = [v for v in vectors if any(v)]
    if not vectors:
        return []
    R, _ = int_echelon(vectors, n)
    return [tuple(r) for r in R]


def solve(A: Sequence[Sequence], b: Sequence):
    """Some exact solution of ``A x = b`` or ``None`` when inconsistent."""
    n = len(A[0]) if A else 0
    aug = [list(row) + [bb] for row, bb in zip(A, b)]
    R, pivots = rref(aug, n + 1)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(R, pivots):
        x[p] = row[n]
    return tuple(x)


def inverse(M: Sequence[Sequence]):
    n = len(M)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(M)]
    R, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise RankDeficient("matrix is singular")
    return tuple(tuple(row[n:]) for row in R)


def det(M: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by fraction-free (Bareiss) elimination."""
    n = len(M)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # exact by Sylvester's identity
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def matmul(A, B):
    Bt = list(zip(*B))
    return tuple(tuple(dot(row, col) for col in Bt) for row in A)


# ---------------------------------------------------------------------------
# integral lattices


def _xgcd(a: int, b: int):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _upper_hnf(A: Sequence[Sequence[int]]):
    """Row-echelon Hermite form ``H = U A`` with entries above pivots reduced."""
    m = len(A)
    n = len(A[0]) if m else 0
    H = [list(map(int, row)) for row in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            b = H[i][c]
            if b == 0:
                continue
            a = H[r][c]
            g, x, y = _xgcd(a, b)
            ag, bg = a // g, b // g
            for M in (H, U):
                ri, rr = M[i], M[r]
                M[r] = [x * p + y * q for p, q in zip(rr, ri)]
                M[i] = [-bg * p + ag * q for p, q in zip(rr, ri)]
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        p = H[r][c]
        for i in range(r):
            q = H[i][c] // p
            if q:
                H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        pivots.append(c)
        r += 1
    return H, U, pivots


def hnf(W: Sequence[Sequence[int]]):
    """Row-style Hermite normal form of a full-row-rank integer matrix.

    Returns ``(H, U)`` with ``H = U W`` and ``U`` unimodular.  Each row of
    ``H`` ends at its pivot (zeros to the right), pivots are positive and move
    right going down, and the entries below a pivot lie in ``[0, pivot)``.
    """
    W = [list(map(int, row)) for row in W]
    k = len(W)
    if k == 0:
        return (), ()
    n = len(W[0])
    R = [row[::-1] for row in W[::-1]]
    HR, UR, pivots = _upper_hnf(R)
    if len(pivots) < k:
        raise RankDeficient("rows of W are linearly dependent")
    H = tuple(tuple(row[::-1]) for row in HR[::-1])
    U = tuple(tuple(row[::-1]) for row in UR[::-1])
    assert len(H[0]) == n
    return H, U


def _int_inverse(U: Sequence[Sequence[int]]):
    inv = inverse(U)
    return tuple(tuple(int(x) for x in row) for row in inv)


def extend_to_lattice_basis(ws: Sequence[Sequence[int]], n: int | None = None):
    """Complete primitive rows ``w_1..w_k`` to a unimodular ``n x n`` matrix.

    The input rows come first, verbatim.  Raises :class:`NotPrimitive` with a
    witness when ``Z^n`` meets the span of the rows in a strictly larger
    lattice than the one they generate.
    """
    ws = [tuple(int(x) for x in w) for w in ws]
    if n is None:
        if not ws:
            raise ValueError("dimension required for an empty row list")
        n = len(ws[0])
    k = len(ws)
    if k == 0:
        return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    WT = [list(col) for col in zip(*ws)]  # n x k
    H, U, pivots = _upper_hnf(WT)
    if len(pivots) < k:
        raise RankDeficient("rows are linearly dependent")
    # W U^T = [H_top^T | 0], so W = H_top^T V[:k] with V = (U^T)^{-1}
    Uinv = _int_inverse(U)
    V = [tuple(col) for col in zip(*Uinv)]
    index = 1
    for i in range(k):
        index *= H[i][i]
    if abs(index) != 1:
        for row in V[:k]:
            coords = in_span_coordinates(ws, row)
            if not is_integral(coords):
                witness = row
                if next(x for x in witness if x) < 0:
                    witness = tuple(-x for x in witness)
                raise NotPrimitive(witness)
        raise AssertionError("index > 1 but no witness found")
    basis = tuple(ws) + tuple(tuple(r) for r in V[k:])
    return basis


def in_span_coordinates(hs: Sequence[Sequence], p: Sequence):
    """Coordinates of ``p`` in the (independent) rows ``hs``, or None."""
    return solve([list(c) for c in zip(*hs)], p)


def _parallelepiped_points(hs: Sequence[Sequence[int]]):
    """Nonzero integral points of ``{sum l_i h_i : 0 <= l_i < 1}`` in lex order."""
    n = len(hs[0])
    lo = [sum(min(0, h[i]) for h in hs) for i in range(n)]
    hi = [sum(max(0, h[i]) for h in hs) for i in range(n)]
    k = len(hs)
    # exact coordinates via a fixed k x k invertible minor
    _, sel = rref([list(h) for h in hs], n)
    minor = [[hs[j][i] for j in range(k)] for i in sel]
    minv = inverse(minor)
    for p in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if not any(p):
            continue
        lam = [sum(minv[r][s] * p[sel[s]] for s in range(k)) for r in range(k)]
        if not all(0 <= x < 1 for x in lam):
            continue
        if any(sum(lam[j] * hs[j][i] for j in range(k)) != p[i] for i in range(n)):
            continue
        yield p, lam


def parallelepiped_lattice_points(hs: Sequence[Sequence[int]]) -> list:
    """All nonzero integral points of the half-open parallelepiped of ``hs``."""
    return [p for p, _ in _parallelepiped_points(hs)]


def basis_in_cone(gs: Sequence[Sequence], n: int | None = None) -> tuple:
    """Integral basis of ``Z^n ∩ span(gs)`` made of vectors of ``cone(gs)``.

    Starts from the primitive generators and, while their half-open
    parallelepiped holds a nonzero lattice point ``p = sum l_i h_i``, swaps
    ``p`` in for the generator with the largest coefficient.  Each swap
    shrinks the sublattice index, so the loop ends with a lattice-free
    parallelepiped, i.e. a basis.
    """
    if not gs:
        return ()
    hs = [primitive_vector(g) for g in gs]
    if n is not None and any(len(h) != n for h in hs):
        raise ValueError("generator length does not match n")
    if rank(hs) < len(hs):
        raise RankDeficient("cone generators are linearly dependent")
    while True:
        found = next(_parallelepiped_points(hs), None)
        if found is None:
            return tuple(tuple(h) for h in hs)
        p, lam = found
        j = max(range(len(hs)), key=lambda i: (lam[i], -i))
        hs[j] = tuple(p)
