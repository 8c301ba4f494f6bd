"""Combinatorics of the 0/1-cube.

Bulk point sets are ``(n, d)`` uint8 arrays; single points can also be
carried as :class:`CubePoint`, which packs the coordinates into one integer
(bit ``j`` is coordinate ``j``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class CubePoint:
    d: int
    bits: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension must be positive")
        if self.bits < 0 or self.bits >> self.d:
            raise ValueError("bits outside the dimension")

    @classmethod
    def from_coords(cls, coords: Sequence[int]) -> "CubePoint":
        bits = 0
        for j, c in enumerate(coords):
            if c not in (0, 1):
                raise ValueError(f"coordinate {j} is {c}, not 0/1")
            bits |= int(c) << j
        return cls(len(coords), bits)

    def coords(self) -> np.ndarray:
        return np.array([(self.bits >> j) & 1 for j in range(self.d)], dtype=np.uint8)

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.d:
            raise IndexError(j)
        return (self.bits >> j) & 1

    def to_hex(self) -> str:
        # nibble k holds coordinates 4k..4k+3, least significant nibble first
        ndig = (self.d + 3) // 4
        return "".join("%x" % ((self.bits >> (4 * k)) & 0xF) for k in range(ndig))

    @classmethod
    def from_hex(cls, d: int, text: str) -> "CubePoint":
        if len(text) != (d + 3) // 4:
            raise ValueError("hex length does not match dimension")
        bits = 0
        for k, ch in enumerate(text):
            bits |= int(ch, 16) << (4 * k)
        return cls(d, bits)

    def to_json(self) -> dict:
        return {"d": self.d, "hex": self.to_hex()}

    @classmethod
    def from_json(cls, obj: dict) -> "CubePoint":
        return cls.from_hex(obj["d"], obj["hex"])


def as_points(S) -> np.ndarray:
    """Coerce CubePoints / nested sequences / arrays into an (n, d) uint8 array."""
    if isinstance(S, np.ndarray):
        arr = S
    else:
        S = list(S)
        if S and isinstance(S[0], CubePoint):
            dims = {p.d for p in S}
            if len(dims) > 1:
                raise ValueError("mixed dimensions")
            arr = np.array([p.coords() for p in S], dtype=np.uint8)
        else:
            arr = np.asarray(S)
    if arr.ndim == 1 and arr.size:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise ValueError("expected a 2-d array of points")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError("points must be 0/1")
    return arr.astype(np.uint8, copy=False)


def _nonempty(S) -> np.ndarray:
    P = as_points(S)
    if len(P) == 0:
        raise ValueError("empty point set")
    return P


def pack_codes(P: np.ndarray) -> list[int]:
    """Integer code of each row (bit j = coordinate j)."""
    weights = [1 << j for j in range(P.shape[1])]
    return [sum(w for w, b in zip(weights, row) if b) for row in P.tolist()]


def unpack_codes(codes, d: int) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64 if d < 63 else object)
    if d < 63:
        return ((codes[:, None] >> np.arange(d, dtype=np.int64)) & 1).astype(np.uint8)
    return np.array([[(int(c) >> j) & 1 for j in range(d)] for c in codes], dtype=np.uint8)


@dataclass(frozen=True)
class CubeFace:
    d: int
    fixed: tuple[int, ...]
    values: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.d - len(self.fixed)

    def contains(self, X) -> np.ndarray:
        P = as_points(X)
        if P.size and P.shape[1] != self.d:
            raise ValueError("dimension mismatch")
        if len(P) == 0:
            return np.zeros(0, dtype=bool)
        idx = list(self.fixed)
        return (P[:, idx] == np.asarray(self.values, dtype=np.uint8)).all(axis=1)


def smallest_cube_face(S) -> CubeFace:
    """F(S): fix exactly the coordinates on which all points of S agree."""
    P = _nonempty(S)
    agree = (P == P[0]).all(axis=0)
    fixed = tuple(int(j) for j in np.flatnonzero(agree))
    return CubeFace(P.shape[1], fixed, tuple(int(P[0, j]) for j in fixed))


def spanning_dimension(S) -> int:
    """d(S), the number of coordinates where S does not agree."""
    return smallest_cube_face(S).dim


def is_spanning(S) -> bool:
    P = _nonempty(S)
    return spanning_dimension(P) == P.shape[1]


def spanning_dimensions(batch: np.ndarray) -> np.ndarray:
    """d(S) for a stack of samples of shape (trials, r, d)."""
    return (batch != batch[:, :1, :]).any(axis=1).sum(axis=1)


def count_in_face(X, F: CubeFace) -> int:
    """n(S) = number of points of X on the cube face F."""
    P = as_points(X)
    if len(P) == 0:
        return 0
    return int(F.contains(P).sum())


def barycenter(S) -> tuple[Fraction, ...]:
    P = _nonempty(S)
    r = len(P)
    return tuple(Fraction(int(s), r) for s in P.sum(axis=0, dtype=np.int64))


@dataclass(frozen=True)
class ColumnClassification:
    """Column classes J(t) of the r x d matrix with rows S.

    Patterns ``t`` are integer codes with bit ``i`` = entry in row ``i``.
    """

    r: int
    d: int
    classes: dict = field(repr=False)
    constant_zero: tuple[int, ...] = ()
    constant_one: tuple[int, ...] = ()

    @property
    def patterns(self) -> list[int]:
        return list(range(1, 2**self.r - 1))

    @property
    def pi(self) -> Fraction:
        return Fraction(1, 2**self.r - 2)

    @property
    def m(self) -> int:
        return min(len(self.classes[t]) for t in self.patterns)

    @property
    def delta_max(self) -> Fraction:
        pd = self.pi * self.d
        return max(abs(len(self.classes[t]) - pd) for t in self.patterns)

    def selected(self, m: int | None = None) -> dict[int, tuple[int, ...]]:
        """The lowest-index ``m`` columns of each class."""
        m = self.m if m is None else m
        if m > self.m:
            raise ValueError(f"classes only guarantee {self.m} columns, asked for {m}")
        return {t: self.classes[t][:m] for t in self.patterns}


def column_codes(P: np.ndarray) -> np.ndarray:
    r = P.shape[0]
    return (P.astype(np.int64) << np.arange(r, dtype=np.int64)[:, None]).sum(axis=0)


def classify_columns(S) -> ColumnClassification:
    P = _nonempty(S)
    r, d = P.shape
    if r < 3:
        raise ValueError("column classification needs r >= 3 rows")
    codes = column_codes(P)
    classes = {t: tuple(int(j) for j in np.flatnonzero(codes == t)) for t in range(1, 2**r - 1)}
    zero = tuple(int(j) for j in np.flatnonzero(codes == 0))
    one = tuple(int(j) for j in np.flatnonzero(codes == 2**r - 1))
    return ColumnClassification(r, d, classes, zero, one)


def unique_rows(P: np.ndarray) -> np.ndarray:
    """Distinct rows in first-occurrence order."""
    if len(P) == 0:
        return P
    _, idx = np.unique(P, axis=0, return_index=True)
    return P[np.sort(idx)]


def member_mask(X: np.ndarray, S: np.ndarray) -> np.ndarray:
    """Boolean mask of rows of X that also occur in S."""
    if len(X) == 0 or len(S) == 0:
        return np.zeros(len(X), dtype=bool)
    keys = {bytes(row) for row in np.ascontiguousarray(S)}
    return np.fromiter((bytes(row) in keys for row in np.ascontiguousarray(X)), bool, len(X))


def all_vertices(d: int) -> np.ndarray:
    return unpack_codes(np.arange(2**d), d)


def points_from(iterable: Iterable[Sequence[int]]) -> np.ndarray:
    return as_points([list(p) for p in iterable])
