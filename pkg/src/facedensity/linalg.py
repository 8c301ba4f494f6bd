"""Small exact linear algebra over the rationals.

Inputs are lists or arrays of ``Fraction``/int.  Elimination is fraction-free
on integer object arrays so that a few hundred rows stay cheap.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

import numpy as np


_PRIME = 2_147_483_647


def _int_matrix(rows) -> np.ndarray:
    """Rows scaled to integers (object dtype)."""
    if isinstance(rows, np.ndarray) and rows.dtype.kind in "iub":
        return rows.astype(np.int64).astype(object)
    out = []
    for row in rows:
        fr = [Fraction(v) for v in row]
        L = lcm(*(v.denominator for v in fr)) if fr else 1
        out.append([int(v * L) for v in fr])
    return np.array(out, dtype=object).reshape(len(out), -1)


def gauss_jordan(M: np.ndarray) -> tuple[np.ndarray, list[int], int]:
    """Fraction-free Gauss-Jordan elimination on an integer matrix.

    Returns ``(E, pivots, det)``: the first ``len(pivots)`` rows of ``E``
    divided by ``det`` form the reduced row echelon form.
    """
    M = M.copy()
    nrows, ncols = M.shape
    prev = 1
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(M[r:, c] != 0)
        if not len(nz):
            continue
        p = r + int(nz[0])
        if p != r:
            M[[r, p]] = M[[p, r]]
        piv = M[r, c]
        row = M[r].copy()
        M[:] = (piv * M - np.multiply.outer(M[:, c], row)) // prev
        M[r] = row
        prev = piv
        pivots.append(c)
        r += 1
    if prev < 0:
        M = -M
        prev = -prev
    # earlier pivot rows were scaled by older determinants; bring all to prev
    E = M[:r]
    for i, c in enumerate(pivots):
        if E[i, c] != prev:
            E[i] = E[i] * prev // E[i, c]
    return E, pivots, int(prev)


def rref(rows) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the pivot column indices."""
    if len(rows) == 0:
        return [], []
    E, pivots, det = gauss_jordan(_int_matrix(rows))
    return [[Fraction(int(v), det) for v in row] for row in E], pivots


def _rank_mod_p(M: np.ndarray) -> int:
    A = np.mod(M, _PRIME).astype(np.int64)
    nrows, ncols = A.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(A[r:, c])
        if not len(nz):
            continue
        p = r + int(nz[0])
        if p != r:
            A[[r, p]] = A[[p, r]]
        inv = pow(int(A[r, c]), -1, _PRIME)
        A[r] = (A[r] * inv) % _PRIME
        f = A[r + 1:, c].copy()
        A[r + 1:] = (A[r + 1:] - np.outer(f, A[r]) % _PRIME) % _PRIME
        r += 1
    return r


def rank(rows) -> int:
    M = _int_matrix(rows)
    if M.size == 0:
        return 0
    # rank mod p never exceeds the rational rank, so reaching the cap is proof
    rp = _rank_mod_p(M)
    if rp == min(M.shape):
        return rp
    return len(gauss_jordan(M)[1])


def integer_vector(v: Sequence) -> list[int]:
    """Scale a rational vector to a primitive integer vector (same direction)."""
    fr = [Fraction(x) for x in v]
    L = lcm(*(x.denominator for x in fr)) if fr else 1
    ints = [int(x * L) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints] if g > 1 else ints


def nullspace(rows, ncols: int | None = None) -> list[list[int]]:
    """Integer basis of the right nullspace of ``rows``."""
    R, pivots = rref(rows)
    if ncols is None:
        ncols = len(rows[0]) if len(rows) else 0
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(integer_vector(v))
    return basis


def solve(A, b) -> list[Fraction] | None:
    """One solution of ``A x = b`` (free variables set to zero), or None."""
    n = len(A[0])
    R, pivots = rref([list(row) + [bi] for row, bi in zip(A, b)])
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(R, pivots):
        x[p] = row[n]
    return x


def affine_rank(points) -> int:
    """Number of affinely independent points among ``points`` (dim of aff + 1)."""
    P = np.asarray(points)
    if len(P) == 0:
        return 0
    diffs = (P[1:].astype(np.int64) - P[0].astype(np.int64)).tolist()
    return 1 + (rank(diffs) if diffs else 0)


def row_basis(rows) -> list[list[Fraction]]:
    """A maximal linearly independent subset of ``rows`` (kept in input order)."""
    basis: list[list[Fraction]] = []
    for row in rows:
        cand = basis + [list(map(Fraction, row))]
        if rank(cand) == len(cand):
            basis = cand
    return basis


def project_out(a: Sequence, rows) -> list[Fraction]:
    """Orthogonal projection of ``a`` onto the orthogonal complement of span(rows)."""
    a = [Fraction(v) for v in a]
    B = row_basis(rows)
    if not B:
        return a
    G = [[sum(x * y for x, y in zip(u, v)) for v in B] for u in B]
    rhs = [sum(x * y for x, y in zip(u, a)) for u in B]
    y = solve(G, rhs)
    return [ai - sum(yk * B[k][i] for k, yk in enumerate(y)) for i, ai in enumerate(a)]


def scaled_integers(v: Sequence) -> tuple[list[int], int]:
    """Return ``(ints, L)`` with ``ints[i] == v[i] * L`` and L the lcm of denominators."""
    fr = [Fraction(x) for x in v]
    L = lcm(*(x.denominator for x in fr)) if fr else 1
    return [int(x * L) for x in fr], L


def int_dot(points: np.ndarray, coeffs: Sequence[int]) -> np.ndarray:
    """Exact ``points @ coeffs`` for a 0/1 (or small int) matrix and integer coefficients."""
    bound = sum(abs(c) for c in coeffs) * max(1, int(np.abs(points).max(initial=0)))
    if bound < 2**62:
        return points.astype(np.int64) @ np.asarray(coeffs, dtype=np.int64)
    return points.astype(object) @ np.asarray(coeffs, dtype=object)
