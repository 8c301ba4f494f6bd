"""Exact LP oracles for face events of 0/1 polytopes.

Every verdict is decided in exact rational arithmetic.  For large point sets
(``method="hinted"``) a floating-point LP is solved first only to guess a
small working set or a witness; the guess is then either verified exactly
against the whole input or replaced by an exact solve:

* a positive witness (halfspace, convex combination) is checked exactly on
  all points;
* a negative verdict is certified by an exact LP on a subset of the
  constraints being infeasible, which implies infeasibility of the whole.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import linprog as float_linprog

from . import lp
from .cube import _nonempty, as_points, barycenter, member_mask, unique_rows
from .errors import LimitExceeded
from .linalg import gauss_jordan, affine_rank, int_dot, nullspace, project_out, scaled_integers
from .sampler import _rng

EXACT_CUTOFF = 16
COUNT_LIMIT = 50
_TOL = 1e-9
_SEED_ROWS = 200


@dataclass(frozen=True)
class Halfspace:
    """The closed halfspace ``a . x <= a0``."""

    a: tuple[Fraction, ...]
    a0: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(Fraction(v) for v in self.a))
        object.__setattr__(self, "a0", Fraction(self.a0))
        if not any(self.a):
            raise ValueError("normal vector must be nonzero")

    @property
    def d(self) -> int:
        return len(self.a)

    def values(self, X) -> list[Fraction]:
        """Exact ``a . x - a0`` for every row of X."""
        P = as_points(X)
        ints, L = scaled_integers(list(self.a) + [self.a0])
        raw = int_dot(P, ints[:-1])
        return [Fraction(int(v) - ints[-1], L) for v in raw]

    def contains(self, x) -> bool:
        return sum((ai * Fraction(xi) for ai, xi in zip(self.a, x)), Fraction(0)) <= self.a0

    def to_json(self) -> dict:
        pair = lambda q: [str(q.numerator), str(q.denominator)]  # noqa: E731
        return {"d": self.d, "a": [pair(v) for v in self.a], "a0": pair(self.a0)}

    @classmethod
    def from_json(cls, obj: dict) -> "Halfspace":
        frac = lambda p: Fraction(int(p[0]), int(p[1]))  # noqa: E731
        return cls(tuple(frac(p) for p in obj["a"]), frac(obj["a0"]))


@dataclass(frozen=True)
class FaceCertificate:
    verdict: bool
    witness: Halfspace | None = None
    touching: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.verdict


def _check_dims(*sets: np.ndarray) -> int:
    dims = {P.shape[1] for P in sets if P.size}
    if len(dims) > 1:
        raise ValueError("dimension mismatch")
    return dims.pop() if dims else 0


# ---------------------------------------------------------------- is_face


def _face_lp_exact(S: np.ndarray, R: np.ndarray):
    d = S.shape[1]
    A_eq = [row + [-1] for row in S.tolist()]
    A_ub = [row + [-1] for row in R.tolist()]
    res = lp.linprog(
        [0] * (d + 1), A_ub, [-1] * len(A_ub), A_eq, [0] * len(A_eq), free=range(d + 1)
    )
    if res.status == lp.INFEASIBLE:
        return None
    return res.x[:d], res.x[d]


def _face_gap(a, S0, R) -> Fraction | None:
    """min over R of (a.s0 - a.x), exactly; None if R is empty."""
    ints, L = scaled_integers(a)
    a0L = sum(i * int(s) for i, s in zip(ints, S0))
    if len(R) == 0:
        return None
    return Fraction(a0L - int(int_dot(R, ints).max()), L)


def _cutting_plane(S: np.ndarray, R: np.ndarray, working: Sequence[int]):
    d = S.shape[1]
    work = sorted(set(int(i) for i in working)) or list(range(min(len(R), 2 * d)))
    while True:
        sol = _face_lp_exact(S, R[work])
        if sol is None:
            return None
        a, a0 = sol
        ints, L = scaled_integers(list(a) + [a0])
        vals = int_dot(R, ints[:-1]) - ints[-1]
        bad = np.flatnonzero(vals > -L)
        if len(bad) == 0:
            return a, a0
        inwork = set(work)
        order = bad[np.argsort(-np.asarray(vals[bad], dtype=float), kind="stable")]
        add = [int(i) for i in order if int(i) not in inwork][: 2 * (d + 1)]
        work = sorted(inwork.union(add))


def _face_float(S: np.ndarray, R: np.ndarray):
    # max delta s.t. a.x - a0 + delta <= 0 on R, a.s = a0 on S, |a| <= 1.
    # Always feasible and bounded; delta > 0 gives a separating normal, and at
    # delta = 0 the row duals are a convex combination of R lying in aff S.
    d = S.shape[1]
    c = np.zeros(d + 2)
    c[-1] = -1.0
    return float_linprog(
        c,
        A_ub=np.hstack([R, -np.ones((len(R), 1)), np.ones((len(R), 1))]),
        b_ub=np.zeros(len(R)),
        A_eq=np.hstack([S, -np.ones((len(S), 1)), np.zeros((len(S), 1))]),
        b_eq=np.zeros(len(S)),
        bounds=[(-1, 1)] * d + [(None, None), (0, None)],
        method="highs",
    )


def _face_hinted(S: np.ndarray, R: np.ndarray):
    d = S.shape[1]
    Sf, Rf = S.astype(float), R.astype(float)
    # row generation, seeded with the points nearest the barycenter of S
    dist = np.abs(Rf - Sf.mean(axis=0)).sum(axis=1)
    work = np.sort(np.argsort(dist, kind="stable")[:_SEED_ROWS])
    while True:
        res = _face_float(Sf, Rf[work])
        if res.status != 0:
            return _cutting_plane(S, R, work)
        delta = res.x[-1]
        if delta <= 1e-7:
            support = work[np.abs(res.ineqlin.marginals) > _TOL]
            return _cutting_plane(S, R, support)
        vals = Rf @ res.x[:d] - res.x[d] + delta
        viol = np.flatnonzero(vals > 1e-9 * max(1.0, delta))
        if len(viol) == 0:
            break
        viol = viol[np.argsort(-vals[viol], kind="stable")][:_SEED_ROWS]
        work = np.union1d(work, viol)
    a = [Fraction(float(v / delta)).limit_denominator(10**6) for v in res.x[:d]]
    diffs = (S[1:].astype(np.int64) - S[0].astype(np.int64)).tolist()
    a = project_out(a, diffs)
    if any(a):
        gap = _face_gap(a, S[0], R)
        if gap is not None and gap > 0:
            a = [v / gap for v in a]
            a0 = sum((ai * int(s) for ai, s in zip(a, S[0])), Fraction(0))
            return a, a0
    slack = Rf @ res.x[:d] - res.x[d]
    return _cutting_plane(S, R, np.flatnonzero(slack >= -delta * (1 + 1e-6)))


def is_face(S, X, method: str = "auto") -> FaceCertificate:
    """Decide whether conv S is a face of conv(S u X).

    On success the witness satisfies ``a.s = a0`` on S and ``a.x <= a0 - 1``
    on every point of X outside S.  ``touching`` indexes the rows of S
    followed by the rows of X that lie on the hyperplane.
    """
    S_in = _nonempty(S)
    X_in = as_points(X)
    d = _check_dims(S_in, X_in)
    S_u = unique_rows(S_in)
    R = X_in[~member_mask(X_in, S_u)] if len(X_in) else X_in.reshape(0, d)
    if len(R) == 0:
        # conv S is the whole polytope
        diffs = (S_u[1:].astype(np.int64) - S_u[0].astype(np.int64)).tolist()
        normals = nullspace(diffs, d) if diffs else [[1 if j == 0 else 0 for j in range(d)]]
        if not normals:
            return FaceCertificate(True, None, tuple(range(len(S_in) + len(X_in))))
        a = normals[0]
        h = Halfspace(tuple(a), sum(ai * int(s) for ai, s in zip(a, S_u[0])))
        return FaceCertificate(True, h, tuple(range(len(S_in) + len(X_in))))
    if method == "auto":
        method = "exact" if len(R) <= EXACT_CUTOFF else "hinted"
    if method == "exact":
        sol = _face_lp_exact(S_u, R)
    elif method == "hinted":
        sol = _face_hinted(S_u, R)
    else:
        raise ValueError(f"unknown method {method!r}")
    if sol is None:
        return FaceCertificate(False)
    a, a0 = sol
    h = Halfspace(tuple(a), a0)
    allpts = np.vstack([S_in, X_in]) if len(X_in) else S_in
    touching = tuple(i for i, v in enumerate(h.values(allpts)) if v == 0)
    return FaceCertificate(True, h, touching)


def verify_certificate(cert: FaceCertificate, S, X) -> bool:
    """Replay a positive certificate exactly against S and X."""
    if not cert.verdict or cert.witness is None:
        return False
    S_in = _nonempty(S)
    X_in = as_points(X)
    if any(v != 0 for v in cert.witness.values(S_in)):
        return False
    R = X_in[~member_mask(X_in, unique_rows(S_in))] if len(X_in) else X_in
    return all(v <= -1 for v in cert.witness.values(R)) if len(R) else True


# ------------------------------------------------------ membership / interior


def _hull_lp_exact(z, V: np.ndarray, direction=None) -> lp.LPResult:
    """max eps s.t. z + eps*direction = sum lam_v v, sum lam = 1, lam, eps >= 0."""
    n, d = V.shape
    cols = V.T.tolist()
    if direction is None:
        A = [cols[j] for j in range(d)] + [[1] * n]
        return lp.linprog([0] * n, A_eq=A, b_eq=list(z) + [1])
    A = [cols[j] + [-Fraction(direction[j])] for j in range(d)] + [[1] * n + [0]]
    return lp.linprog([0] * n + [1], A_eq=A, b_eq=list(z) + [1])


def _hull_lp_float(z, V: np.ndarray, direction=None):
    n, d = V.shape
    zf = np.array([float(v) for v in z])
    if direction is None:
        A = np.vstack([V.T.astype(float), np.ones((1, n))])
        return float_linprog(np.zeros(n), A_eq=A, b_eq=np.append(zf, 1.0), bounds=(0, None), method="highs")
    e = np.array([float(v) for v in direction])
    A = np.vstack(
        [np.hstack([V.T.astype(float), -e[:, None]]), np.append(np.ones(n), 0.0)[None, :]]
    )
    c = np.zeros(n + 1)
    c[-1] = -1.0
    return float_linprog(c, A_eq=A, b_eq=np.append(zf, 1.0), bounds=(0, None), method="highs")


def _room_from_basis(z, V: np.ndarray, direction, support) -> Fraction | None:
    """Exact eps of the float basis: solve the restricted system, check signs."""
    d = V.shape[1]
    zi, L = scaled_integers(z)
    k = len(support)
    M = np.zeros((d + 1, k + 2), dtype=np.int64)
    M[:d, :k] = L * V[support].T.astype(np.int64)
    M[:d, k] = [-L * int(e) for e in direction]
    M[:d, k + 1] = zi
    M[d, :k] = L
    M[d, k + 1] = L
    E, pivots, det = gauss_jordan(M.astype(object))
    if k + 1 in pivots:
        return None
    x = [Fraction(0)] * (k + 1)
    for row, p in zip(E, pivots):
        x[p] = Fraction(int(row[k + 1]), det)
    if any(v < 0 for v in x) or x[-1] <= 0:
        return None
    return x[-1]


def _blocked(z, V: np.ndarray, direction, u) -> bool:
    """Exact check that u supports conv V at z and points along direction."""
    d = V.shape[1]
    u = [Fraction(float(v)).limit_denominator(10**6) for v in u]
    uf = np.array([float(v) for v in u])
    zf = np.array([float(v) for v in z])
    tight = V[np.abs(V @ uf - uf @ zf) < 1e-6]
    diffs = [[int(t[j]) - z[j] for j in range(d)] for t in tight]
    if diffs:
        u = project_out(u, diffs)
    if sum(ui * ej for ui, ej in zip(u, direction)) <= 0:
        return False
    ints, L = scaled_integers(list(u) + list(z))
    ui = ints[:d]
    uz = sum(a * b for a, b in zip(ui, ints[d:]))
    # ints[d:] carry z scaled by the same L, so compare V.u * L against u.z * L
    return int(int_dot(V, ui).max()) * L <= uz


def _direction_room(z, V: np.ndarray, direction, method: str) -> Fraction | None:
    """Exact max eps (or a certified positive lower bound); None if z is outside conv V."""
    if method == "hinted":
        res = _hull_lp_float(z, V, direction)
        if res.status == 0:
            if -res.fun > _TOL:
                support = np.flatnonzero(res.x[:-1] > _TOL)
                room = _room_from_basis(z, V, direction, support)
                if room is not None:
                    return room
                sub = _hull_lp_exact(z, V[support], direction)
                if sub.status == lp.OPTIMAL and sub.objective > 0:
                    return sub.objective
            elif _blocked(z, V, direction, res.eqlin.marginals[:-1]):
                return Fraction(0)
    res = _hull_lp_exact(z, V, direction)
    if res.status == lp.INFEASIBLE:
        return None
    if res.status == lp.UNBOUNDED:
        raise ValueError("zero direction")
    return res.objective


def _pick(method: str, n: int) -> str:
    if method == "auto":
        return "exact" if n <= EXACT_CUTOFF else "hinted"
    if method not in ("exact", "hinted"):
        raise ValueError(f"unknown method {method!r}")
    return method


def _as_rational(z) -> list[Fraction]:
    return [Fraction(v) for v in z]


def is_in_hull(z, V, method: str = "auto") -> bool:
    """Exact test of z in conv V."""
    V = unique_rows(_nonempty(V))
    z = _as_rational(z)
    if len(z) != V.shape[1]:
        raise ValueError("dimension mismatch")
    if _pick(method, len(V)) == "hinted":
        res = _hull_lp_float(z, V)
        if res.status == 0:
            support = np.flatnonzero(res.x > _TOL)
            if _hull_lp_exact(z, V[support]).feasible:
                return True
    return _hull_lp_exact(z, V).feasible


def is_full_dimensional(V) -> bool:
    V = _nonempty(V)
    return affine_rank(unique_rows(V)) == V.shape[1] + 1


def is_in_interior(z, V, method: str = "auto") -> bool:
    """z in the interior of the full-dimensional polytope conv V.

    Equivalent to ``max eps > 0`` with ``z +- eps e_j`` in conv V for all j;
    solved one direction at a time, stopping at the first direction with no room.
    """
    V = unique_rows(_nonempty(V))
    z = _as_rational(z)
    d = V.shape[1]
    if len(z) != d:
        raise ValueError("dimension mismatch")
    if not is_full_dimensional(V):
        raise ValueError("hull is not full-dimensional")
    method = _pick(method, len(V))
    for j in range(d):
        for sign in (1, -1):
            e = [0] * d
            e[j] = sign
            room = _direction_room(z, V, e, method)
            if room is None or room <= 0:
                return False
    return True


def conv_in_boundary(S, X, method: str = "auto") -> bool:
    """conv S lies in the boundary of conv(S u X) (which must be full-dimensional)."""
    S_in = _nonempty(S)
    X_in = as_points(X)
    _check_dims(S_in, X_in)
    V = np.vstack([S_in, X_in]) if len(X_in) else S_in
    return not is_in_interior(barycenter(unique_rows(S_in)), V, method)


def minimal_face_indices(W, t_idx: Sequence[int]) -> tuple[int, ...]:
    """Indices of the vertices of the smallest face of conv W containing W[t_idx]."""
    W = _nonempty(W)
    if len(unique_rows(W)) != len(W):
        raise ValueError("W must not contain repeated points")
    t_idx = sorted(set(int(i) for i in t_idx))
    if not t_idx:
        raise ValueError("empty T")
    b = barycenter(W[t_idx])
    inside = set(t_idx)
    cols = W.T.tolist()
    n, d = W.shape
    for w in range(n):
        if w in inside:
            continue
        e = [bj - int(W[w, j]) for j, bj in enumerate(b)]
        A = [cols[j] + [-e[j]] for j in range(d)] + [[1] * n + [0]]
        res = lp.linprog([0] * n + [1], A_eq=A, b_eq=list(b) + [1])
        if res.status == lp.UNBOUNDED or (res.status == lp.OPTIMAL and res.objective > 0):
            inside.add(w)
            if res.status == lp.OPTIMAL:
                inside.update(i for i in range(n) if res.x[i] > 0)
    return tuple(sorted(inside))


def minimal_face_vertices(T, W) -> np.ndarray:
    T = _nonempty(T)
    W = _nonempty(W)
    _check_dims(T, W)
    keys = {bytes(row): i for i, row in enumerate(np.ascontiguousarray(W))}
    try:
        t_idx = [keys[bytes(row)] for row in np.ascontiguousarray(T)]
    except KeyError:
        raise ValueError("T is not a subset of W") from None
    return W[list(minimal_face_indices(W, t_idx))]


# ------------------------------------------------------------ vertex counts


def _subset_sums(coeffs: list[int], wide: bool) -> np.ndarray:
    sums = np.zeros(1, dtype=object if wide else np.int64)
    for c in coeffs:
        sums = np.concatenate([sums, sums + c])
    return sums


def count_halfspace_vertices(h: Halfspace, limit: int = COUNT_LIMIT) -> int:
    """|{v in {0,1}^d : a.v <= a0}| by meet-in-the-middle over two coordinate halves."""
    d = h.d
    if d > limit:
        raise LimitExceeded(f"d = {d} exceeds the counting limit {limit}")
    ints, _ = scaled_integers(list(h.a) + [h.a0])
    A, A0 = ints[:-1], ints[-1]
    wide = sum(abs(v) for v in ints) >= 2**62
    half = d // 2
    left = _subset_sums(A[:half], wide)
    right = np.sort(_subset_sums(A[half:], wide))
    if wide:
        rl = right.tolist()
        return sum(bisect.bisect_right(rl, A0 - s) for s in left.tolist())
    return int(np.searchsorted(right, A0 - left, side="right").sum())


def halfspace_through(z, direction) -> Halfspace:
    a = tuple(Fraction(v) for v in direction)
    return Halfspace(a, sum((ai * Fraction(zi) for ai, zi in zip(a, z)), Fraction(0)))


def p_directions(z, direction_budget: int, stream) -> list[list[int]]:
    d = len(z)
    dirs: list[list[int]] = []
    for j in range(d):
        for s in (1, -1):
            e = [0] * d
            e[j] = s
            dirs.append(e)
    dirs.append([1] * d)
    dirs.append([-1] * d)
    away = [(Fraction(1, 2) > Fraction(v)) - (Fraction(1, 2) < Fraction(v)) for v in z]
    if any(away):
        dirs.append(away)
    if direction_budget:
        rng = _rng(stream)
        while len(dirs) < 2 * d + 2 + bool(any(away)) + direction_budget:
            v = rng.integers(-1, 2, size=d).tolist()
            if any(v):
                dirs.append(v)
    return dirs


def estimate_p_upper(z, direction_budget: int, stream, limit: int = COUNT_LIMIT) -> Fraction:
    """Upper bound on p(z): the smallest vertex fraction of a halfspace through z.

    Directions tried: all +-e_j, +-(1,...,1), the sign pattern pointing from
    the centre away from z, and ``direction_budget`` random {-1,0,1} vectors.
    """
    z = _as_rational(z)
    if any(v < 0 or v > 1 for v in z):
        raise ValueError("z must lie in the unit cube")
    d = len(z)
    if d > limit:
        raise LimitExceeded(f"d = {d} exceeds the counting limit {limit}")
    best = None
    for a in p_directions(z, direction_budget, stream):
        c = count_halfspace_vertices(halfspace_through(z, a), limit)
        best = c if best is None else min(best, c)
    return Fraction(best, 2**d)
