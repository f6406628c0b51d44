"""Exact linear programming by the two-phase simplex method.

Dense tableau over :class:`fractions.Fraction` with Bland's rule, so the
method terminates and its output is a deterministic function of the input.
Free variables are split as ``x = u - v``; every row carries an artificial
column so that the final tableau also holds ``B^-1`` and the dual solution.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .numerics import dot, frac, primitive_vector


class LPStatus(enum.Enum):
    OPTIMAL = "Optimal"
    UNBOUNDED = "Unbounded"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class LPResult:
    """Outcome of one LP.

    For ``OPTIMAL``, ``witness`` is an optimal point and ``dual_ineq`` /
    ``dual_eq`` are multipliers with ``y.A + z.E = obj`` and
    ``y.b + z.e = value``; for a maximization ``y >= 0``, for a minimization
    ``y <= 0``.  For ``UNBOUNDED``, ``witness`` is a primitive recession ray
    that improves the objective.
    """

    status: LPStatus
    value: Fraction | None = None
    witness: tuple | None = None
    dual_ineq: tuple | None = None
    dual_eq: tuple | None = None

    @property
    def optimal(self) -> bool:
        return self.status is LPStatus.OPTIMAL


class _Tableau:
    def __init__(self, rows, rhs, basis):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis

    def pivot(self, r, c, objrows):
        row = self.rows[r]
        p = row[c]
        if p != 1:
            row = [x / p for x in row]
            self.rows[r] = row
            self.rhs[r] /= p
        nz = [j for j, x in enumerate(row) if x]
        for i, other in enumerate(self.rows):
            if i != r:
                f = other[c]
                if f:
                    for j in nz:
                        other[j] -= f * row[j]
                    self.rhs[i] -= f * self.rhs[r]
        for obj in objrows:
            f = obj[0][c]
            if f:
                for j in nz:
                    obj[0][j] -= f * row[j]
                obj[1] -= f * self.rhs[r]
        self.basis[r] = c

    def run(self, obj, allowed):
        """Bland iterations on ``obj = [reduced costs, value]``; True if optimal."""
        while True:
            enter = next((j for j in allowed if obj[0][j] < 0), None)
            if enter is None:
                return True, None
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False, enter
            self.pivot(best[1], enter, [obj])


def simplex(obj: Sequence, A: Sequence = (), b: Sequence = (), E: Sequence = (),
            e: Sequence = (), maximize: bool = True, n: int | None = None) -> LPResult:
    """Optimize ``obj . x`` over ``{A x <= b, E x = e}`` with ``x`` free."""
    obj = [frac(x) for x in obj]
    n = len(obj) if n is None else n
    A = [[frac(x) for x in row] for row in A]
    E = [[frac(x) for x in row] for row in E]
    b = [frac(x) for x in b]
    e = [frac(x) for x in e]
    m_ub, m_eq = len(A), len(E)
    m = m_ub + m_eq
    # columns: u (n) | v (n) | slacks (m_ub) | artificials (m)
    n_u = 2 * n
    n_s = m_ub
    ncol = n_u + n_s + m
    art0 = n_u + n_s
    rows, rhs, sign = [], [], []
    for i in range(m):
        a = A[i] if i < m_ub else E[i - m_ub]
        beta = b[i] if i < m_ub else e[i - m_ub]
        s = -1 if beta < 0 else 1
        row = [Fraction(0)] * ncol
        for j, x in enumerate(a):
            row[j] = s * x
            row[n + j] = -s * x
        if i < m_ub:
            row[n_u + i] = Fraction(s)
        row[art0 + i] = Fraction(1)
        rows.append(row)
        rhs.append(s * beta)
        sign.append(s)
    tab = _Tableau(rows, rhs, [art0 + i for i in range(m)])

    # phase 1: maximize -sum(artificials); row0_j = c_B B^-1 A_j - c_j
    r0 = [Fraction(0)] * ncol
    for row in rows:
        for j in range(art0):
            r0[j] -= row[j]
    phase1 = [r0, -sum(rhs, Fraction(0))]
    ok, _ = tab.run(phase1, range(ncol))
    if phase1[1] < 0:
        return LPResult(LPStatus.INFEASIBLE)
    for i in range(m):
        if tab.basis[i] >= art0:
            j = next((j for j in range(art0) if tab.rows[i][j] != 0), None)
            if j is not None:
                tab.pivot(i, j, [phase1])

    sgn = 1 if maximize else -1
    cost = [Fraction(0)] * ncol
    for j in range(n):
        cost[j] = sgn * obj[j]
        cost[n + j] = -sgn * obj[j]
    r0 = [-c for c in cost]
    value = Fraction(0)
    for i, bi in enumerate(tab.basis):
        cb = cost[bi]
        if cb:
            row = tab.rows[i]
            for j in range(ncol):
                r0[j] += cb * row[j]
            value += cb * tab.rhs[i]
    phase2 = [r0, value]
    ok, enter = tab.run(phase2, range(art0))
    if not ok:
        d = [Fraction(0)] * ncol
        d[enter] = Fraction(1)
        for i, bi in enumerate(tab.basis):
            d[bi] -= tab.rows[i][enter]
        ray = [d[j] - d[n + j] for j in range(n)]
        return LPResult(LPStatus.UNBOUNDED, witness=primitive_vector(ray))
    z = [Fraction(0)] * ncol
    for i, bi in enumerate(tab.basis):
        z[bi] = tab.rhs[i]
    x = tuple(z[j] - z[n + j] for j in range(n))
    y = [sign[i] * phase2[0][art0 + i] for i in range(m)]
    if not maximize:
        y = [-v for v in y]
    return LPResult(LPStatus.OPTIMAL, value=sgn * phase2[1], witness=x,
                    dual_ineq=tuple(y[:m_ub]), dual_eq=tuple(y[m_ub:]))


def solve_lp(P, obj: Sequence, sense: str = "max") -> LPResult:
    """Optimize ``obj`` over a :class:`~splitrank.polyhedron.Polyhedron`."""
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    if len(obj) != P.dim:
        raise ValueError("objective length does not match the dimension")
    if P.is_empty():
        return LPResult(LPStatus.INFEASIBLE)
    return simplex(obj, [r.coeffs for r in P.inequalities], [r.rhs for r in P.inequalities],
                   [r.coeffs for r in P.equalities], [r.rhs for r in P.equalities],
                   maximize=(sense == "max"), n=P.dim)


def maximize(P, obj: Sequence) -> LPResult:
    return solve_lp(P, obj, "max")


def minimize(P, obj: Sequence) -> LPResult:
    return solve_lp(P, obj, "min")


def is_empty(P) -> bool:
    """Phase-1 feasibility test on the H-representation."""
    return simplex([0] * P.dim, [r.coeffs for r in P.inequalities], [r.rhs for r in P.inequalities],
                   [r.coeffs for r in P.equalities], [r.rhs for r in P.equalities],
                   n=P.dim).status is LPStatus.INFEASIBLE


def check_dual(result: LPResult, obj, A, b, E=(), e=(), maximize=True) -> bool:
    """Verify the dual certificate attached to an optimal result."""
    if not result.optimal:
        return False
    y, z = result.dual_ineq, result.dual_eq
    if maximize and any(v < 0 for v in y):
        return False
    if not maximize and any(v > 0 for v in y):
        return False
    n = len(obj)
    for j in range(n):
        s = sum((y[i] * A[i][j] for i in range(len(A))), Fraction(0))
        s += sum((z[i] * E[i][j] for i in range(len(E))), Fraction(0))
        if s != obj[j]:
            return False
    val = dot(y, b) + dot(z, e)
    return val == result.value


def in_cone(target: Sequence, generators: Sequence[Sequence]) -> bool:
    """Exact LP feasibility of ``target = sum l_i g_i`` with ``l >= 0``."""
    k = len(generators)
    n = len(target)
    if k == 0:
        return not any(target)
    E = [[generators[i][j] for i in range(k)] for j in range(n)]
    A = [[-int(i == j) for j in range(k)] for i in range(k)]
    res = simplex([0] * k, A, [0] * k, E, list(target), n=k)
    return res.status is not LPStatus.INFEASIBLE
