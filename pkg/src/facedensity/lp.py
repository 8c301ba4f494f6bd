"""Exact linear programming.

Two-phase primal simplex with Bland's rule on an all-integer tableau.
Rows are scaled to integers up front; pivots use the integer-preserving
update ``T' = (T[r,s] * T - T[:,s] T[r,:]) / det`` so every entry stays an
integer subdeterminant and no gcd work is done inside the loop.  The true
tableau is always ``T / det`` with ``det > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

# int64 tableau while every entry stays below 2^30 (products then fit in 63 bits)
_SMALL = 2**30

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    x: list[Fraction] | None = None
    objective: Fraction | None = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


def _int_row(row) -> list[int]:
    fr = [Fraction(v) for v in row]
    L = lcm(*(v.denominator for v in fr)) if fr else 1
    return [int(v * L) for v in fr]


class _Tableau:
    def __init__(self, T: np.ndarray, basis: list[int]):
        self.T = T
        self.basis = basis
        self.det = 1
        self.pivots = 0

    def _widen(self) -> None:
        T = self.T
        if T.dtype != object and (np.abs(T).max() >= _SMALL or self.det >= _SMALL):
            self.T = T.astype(object)

    def pivot(self, r: int, s: int) -> None:
        self._widen()
        T = self.T
        prs = T[r, s]
        row = T[r].copy()
        T[:] = (prs * T - np.multiply.outer(T[:, s], row)) // self.det
        T[r] = row
        self.det = int(prs)
        if self.det < 0:
            T *= -1
            self.det = -self.det
        self.basis[r] = s
        self.pivots += 1
        # the ratio test multiplies two entries, so keep them below 2^30
        self._widen()

    def run(self, cols: int) -> str:
        """Bland iterations on the last row; columns >= ``cols`` are never entered."""
        m = self.T.shape[0] - 1
        while True:
            T = self.T
            z = T[m, :cols]
            neg = np.flatnonzero(z < 0)
            if not len(neg):
                return OPTIMAL
            s = int(neg[0])
            best = None
            for i in range(m):
                a = T[i, s]
                if a > 0:
                    if best is None:
                        best = i
                        continue
                    lhs = T[i, -1] * T[best, s]
                    rhs = T[best, -1] * a
                    if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[best]):
                        best = i
            if best is None:
                return UNBOUNDED
            self.pivot(best, s)


def simplex(A, b, c) -> LPResult:
    """Maximize ``c.x`` subject to ``A x = b``, ``x >= 0`` in exact arithmetic."""
    m = len(A)
    n = len(c)
    if m == 0:
        if any(Fraction(v) > 0 for v in c):
            return LPResult(UNBOUNDED)
        return LPResult(OPTIMAL, [Fraction(0)] * n, Fraction(0))

    rows = []
    for row, bi in zip(A, b):
        ints = _int_row(list(row) + [bi])
        rows.append([-v for v in ints] if ints[-1] < 0 else ints)
    big = max((abs(v) for row in rows for v in row), default=0) * (m + 1) >= _SMALL
    T = np.zeros((m + 1, n + m + 1), dtype=object if big else np.int64)
    for i, ints in enumerate(rows):
        T[i, :n] = ints[:n]
        T[i, n + i] = 1
        T[i, -1] = ints[-1]
    # phase 1: maximize -sum(artificials)
    T[m, :n] = -T[:m, :n].sum(axis=0)
    T[m, -1] = -T[:m, -1].sum()
    tab = _Tableau(T, [n + i for i in range(m)])
    tab.run(n + m)
    if tab.T[m, -1] < 0:
        return LPResult(INFEASIBLE)

    # drive remaining artificials out of the basis, drop redundant rows
    keep_rows = []
    for i in range(m):
        if tab.basis[i] >= n:
            nz = [j for j in range(n) if tab.T[i, j] != 0]
            if nz:
                tab.pivot(i, nz[0])
                keep_rows.append(i)
        else:
            keep_rows.append(i)
    cols = list(range(n)) + [n + m]
    T = tab.T[np.ix_(keep_rows + [m], cols)]
    basis = [tab.basis[i] for i in keep_rows]

    cint = _int_row(c)
    det = tab.det
    T = T.astype(object)
    T[-1, :] = 0
    for i, bv in enumerate(basis):
        if cint[bv]:
            T[-1, :] += cint[bv] * T[i, :]
    for j in range(n):
        T[-1, j] -= cint[j] * det
    if max(abs(v) for v in T.flat) < _SMALL and det < _SMALL:
        T = T.astype(np.int64)
    tab2 = _Tableau(T, basis)
    tab2.det = det
    tab2.pivots = tab.pivots
    tab2._widen()
    status = tab2.run(n)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * n
    for i, bv in enumerate(tab2.basis):
        x[bv] = Fraction(int(tab2.T[i, -1]), int(tab2.det))
    obj = sum((Fraction(cj) * xj for cj, xj in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, x, obj)


def linprog(
    c: Sequence,
    A_ub=None,
    b_ub=None,
    A_eq=None,
    b_eq=None,
    free: Sequence[int] = (),
) -> LPResult:
    """Maximize ``c.x`` s.t. ``A_ub x <= b_ub``, ``A_eq x = b_eq``.

    Variables are nonnegative except the indices in ``free``.
    """
    n = len(c)
    free = sorted(set(free))
    A_ub = [] if A_ub is None else [list(r) for r in A_ub]
    A_eq = [] if A_eq is None else [list(r) for r in A_eq]
    b_ub = [] if b_ub is None else list(b_ub)
    b_eq = [] if b_eq is None else list(b_eq)
    nf = len(free)
    nslack = len(A_ub)
    width = n + nf + nslack

    def expand(row):
        return list(row) + [-row[j] for j in free]

    A, b = [], []
    for k, (row, bi) in enumerate(zip(A_ub, b_ub)):
        r = expand(row) + [0] * nslack
        r[n + nf + k] = 1
        A.append(r)
        b.append(bi)
    for row, bi in zip(A_eq, b_eq):
        A.append(expand(row) + [0] * nslack)
        b.append(bi)
    cc = expand(list(c)) + [0] * nslack
    res = simplex(A, b, cc)
    if res.status != OPTIMAL:
        return LPResult(res.status)
    x = res.x[:n]
    for k, j in enumerate(free):
        x[j] = x[j] - res.x[n + k]
    obj = sum((Fraction(cj) * xj for cj, xj in zip(c, x)), Fraction(0))
    assert len(res.x) == width
    return LPResult(OPTIMAL, x, obj)
