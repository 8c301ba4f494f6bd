"""Reproducible random 0/1 point sets.

Every draw is keyed by ``(seed, stream)``: the generator is Philox seeded
through ``SeedSequence(seed, spawn_key=(stream,))`` so any stream can be
rebuilt on any worker without replaying the others.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cube import unpack_codes

MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SeededStream:
    seed: int
    stream: int = 0

    def __post_init__(self):
        if not (0 <= self.seed <= MASK64 and 0 <= self.stream <= MASK64):
            raise ValueError("seed and stream must be unsigned 64-bit integers")

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.Philox(ss))


def _rng(stream) -> np.random.Generator:
    if isinstance(stream, np.random.Generator):
        return stream
    if isinstance(stream, SeededStream):
        return stream.generator()
    raise TypeError("expected a SeededStream or numpy Generator")


def uniform_points(d: int, n: int, stream) -> np.ndarray:
    return _rng(stream).integers(0, 2, size=(n, d), dtype=np.uint8)


def sample_model2(d: int, n: int, r: int, stream) -> tuple[np.ndarray, np.ndarray]:
    """S (r points) and X (n - r points), all i.i.d. uniform on {0,1}^d."""
    if d < 1 or r < 1 or n <= r:
        raise ValueError("need d >= 1, r >= 1 and n > r")
    P = uniform_points(d, n, stream)
    return P[:r], P[r:]


def _floyd(N: int, n: int, rng: np.random.Generator) -> list[int]:
    highs = np.arange(N - n + 1, N + 1, dtype=np.int64)
    draws = rng.integers(0, highs)
    chosen: set[int] = set()
    out = []
    for j, t in zip(range(N - n, N), draws.tolist()):
        pick = j if t in chosen else t
        chosen.add(pick)
        out.append(pick)
    return out


def sample_model1(d: int, n: int, stream) -> np.ndarray:
    """n distinct points, uniform over the n-subsets of {0,1}^d."""
    if d < 1 or n < 0:
        raise ValueError("need d >= 1 and n >= 0")
    if d < 63:
        if n > 2**d:
            raise ValueError(f"cannot choose {n} distinct points from 2^{d}")
        rng = _rng(stream)
        N = 2**d
        if n == N:
            return unpack_codes(np.arange(N), d)
        if n * n <= N:
            seen: dict[int, None] = {}
            while len(seen) < n:
                for c in rng.integers(0, N, size=n - len(seen)).tolist():
                    seen.setdefault(c)
                    if len(seen) == n:
                        break
            codes = list(seen)
        else:
            codes = _floyd(N, n, rng)
        return unpack_codes(codes, d)
    # huge d: collisions are astronomically rare, reject on repeats
    rng = _rng(stream)
    rows: dict[bytes, np.ndarray] = {}
    while len(rows) < n:
        for row in rng.integers(0, 2, size=(n - len(rows), d), dtype=np.uint8):
            rows.setdefault(row.tobytes(), row)
    return np.array(list(rows.values())[:n], dtype=np.uint8)


def sample_conditioned_spanning(d: int, n: int, r: int, stream) -> tuple[np.ndarray, np.ndarray]:
    """Model 2 conditioned on S spanning.

    Columns of the r x d matrix S are drawn uniformly from the non-constant
    patterns, which is exactly the conditional law.
    """
    if d < 1 or r < 2 or n <= r:
        raise ValueError("need d >= 1, r >= 2 and n > r")
    rng = _rng(stream)
    cols = rng.integers(1, 2**r - 1, size=d, dtype=np.int64)
    S = ((cols[None, :] >> np.arange(r, dtype=np.int64)[:, None]) & 1).astype(np.uint8)
    X = rng.integers(0, 2, size=(n - r, d), dtype=np.uint8)
    return S, X


def random_subsets(W, size: int, count: int, stream) -> list[np.ndarray]:
    """``count`` independent uniform ``size``-subsets of range(len(W)) (as sorted index arrays)."""
    n = W if isinstance(W, int) else len(W)
    if size > n or size < 0:
        raise ValueError(f"subset size {size} exceeds |W| = {n}")
    rng = _rng(stream)
    return [np.sort(rng.choice(n, size=size, replace=False)) for _ in range(count)]
