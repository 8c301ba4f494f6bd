"""Brute-force face lattice for tiny point sets.

Shares no code with the LP path: facets are found by trying every
hyperplane (inside aff W) through affinely independent points, and the
faces are all intersections of facets plus the polytope itself.  Only
meant for |W| around 10 and small d.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np


def _reduce(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    M = [list(r) for r in rows]
    piv: list[int] = []
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        M[r] = [v / M[r][c] for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        piv.append(c)
        r += 1
    return M[:r], piv


def _kernel(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    R, piv = _reduce(rows) if rows else ([], [])
    out = []
    for f in (c for c in range(ncols) if c not in piv):
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(R, piv):
            v[p] = -row[f]
        out.append(v)
    return out


def _dim(points: list[list[Fraction]]) -> int:
    if not points:
        return -1
    diffs = [[a - b for a, b in zip(p, points[0])] for p in points[1:]]
    return len(_reduce(diffs)[1]) if diffs else 0


class FaceLattice:
    """All nonempty faces of conv W, as frozensets of row indices."""

    def __init__(self, W):
        W = np.asarray(W)
        self.W = W
        self.n, self.d = W.shape
        pts = [[Fraction(int(v)) for v in row] for row in W]
        self._pts = pts
        self.dim = _dim(pts)
        everything = frozenset(range(self.n))
        self.facets = self._facets()
        faces = {everything}
        frontier = set(self.facets)
        while frontier:
            faces |= frontier
            nxt = set()
            for F in frontier:
                for G in self.facets:
                    H = F & G
                    if H and H not in faces:
                        nxt.add(H)
            frontier = nxt
        self.faces = faces

    def _facets(self) -> set[frozenset[int]]:
        pts, D = self._pts, self.dim
        if D <= 0:
            return set()
        p0 = pts[0]
        lin = _reduce([[a - b for a, b in zip(p, p0)] for p in pts[1:]])[0]  # basis of the direction space
        out = set()
        for Q in combinations(range(self.n), D):
            q = [pts[i] for i in Q]
            if _dim(q) != D - 1:
                continue
            # normal inside the direction space, orthogonal to the hyperplane's directions
            rel = [[sum(x * y for x, y in zip([a - b for a, b in zip(qi, q[0])], bvec)) for bvec in lin] for qi in q[1:]]
            ker = _kernel(rel, len(lin))
            if len(ker) != 1:
                continue
            normal = [sum(ker[0][t] * lin[t][j] for t in range(len(lin))) for j in range(self.d)]
            vals = [sum(a * (x - y) for a, x, y in zip(normal, p, q[0])) for p in pts]
            if all(v <= 0 for v in vals) or all(v >= 0 for v in vals):
                out.add(frozenset(i for i, v in enumerate(vals) if v == 0))
        return out

    def face_dim(self, F) -> int:
        return _dim([self._pts[i] for i in F])

    def faces_of_dim(self, k: int) -> list[tuple[int, ...]]:
        return sorted(tuple(sorted(F)) for F in self.faces if self.face_dim(F) == k)

    def f(self, k: int) -> int:
        return len(self.faces_of_dim(k))

    def is_face(self, idx) -> bool:
        return frozenset(int(i) for i in idx) in self.faces

    def in_boundary(self, idx) -> bool:
        """conv W[idx] inside some facet (for a full-dimensional polytope)."""
        S = frozenset(int(i) for i in idx)
        return any(S <= F for F in self.facets)

    def minimal_face(self, idx) -> tuple[int, ...]:
        S = frozenset(int(i) for i in idx)
        best = min((F for F in self.faces if S <= F), key=len)
        return tuple(sorted(best))
