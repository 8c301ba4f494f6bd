"""Exact face counts of small polytopes and Monte Carlo face-event estimates."""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import combinations
import math
from math import comb

import numpy as np
from scipy.stats import norm

from .cube import _nonempty, unique_rows
from .entropy import point_entropy
from .errors import InfeasibleConfig, LimitExceeded
from .geometry import conv_in_boundary, is_face, is_full_dimensional, is_in_hull, minimal_face_indices
from .linalg import affine_rank, int_dot, nullspace
from .sampler import SeededStream, random_subsets, sample_conditioned_spanning, sample_model1

EXACT_LIMIT = 16
EXHAUSTIVE_SUBSETS = 10**5
LEVEL = 0.95
BOOTSTRAP_ROUNDS = 1000
# stream index reserved for the bootstrap resampler, far above any trial index
BOOTSTRAP_STREAM = 2**63


class EventKind(str, enum.Enum):
    FACE_LOWER = "FACE_LOWER"  # conv T is a k-dimensional face
    AFF_UPPER = "AFF_UPPER"  # P meets aff T in a face


@dataclass(frozen=True)
class DensityEstimate:
    event: str
    estimate: float
    ci_low: float
    ci_high: float
    trials: int
    subsets: int
    d: int
    n: int
    k: int
    seed: int
    successes: int = 0
    total: int = 0
    level: float = LEVEL

    def to_dict(self) -> dict:
        return asdict(self)


# ------------------------------------------------------------ exact counts


def _check_exact(W: np.ndarray, k: int, limit: int) -> int:
    n = len(W)
    if n > limit:
        raise LimitExceeded(f"|W| = {n} exceeds the exhaustive limit {limit}")
    if len(unique_rows(W)) != n:
        raise ValueError("W must not contain repeated points")
    dim = affine_rank(W) - 1
    if not 0 <= k < dim:
        raise ValueError(f"need 0 <= k < dim conv W = {dim}")
    return dim


def face_list(W, k: int, limit: int = EXACT_LIMIT) -> list[tuple[int, ...]]:
    """Vertex index sets of all k-faces of conv W, sorted."""
    W = _nonempty(W)
    _check_exact(W, k, limit)
    if k == 0:
        return [(i,) for i in range(len(W))]
    faces: set[tuple[int, ...]] = set()
    for T in combinations(range(len(W)), k + 1):
        if affine_rank(W[list(T)]) != k + 1:
            continue
        # a known k-face containing T has the same affine hull, so it is T's minimal face
        if any(set(T) <= set(F) for F in faces):
            continue
        F = minimal_face_indices(W, T)
        if affine_rank(W[list(F)]) == k + 1:
            faces.add(F)
    return sorted(faces)


def exact_face_count(W, k: int, limit: int = EXACT_LIMIT) -> int:
    """f_k(conv W)."""
    return len(face_list(W, k, limit))


def exact_face_density(W, k: int, limit: int = EXACT_LIMIT) -> Fraction:
    """phi_k = f_k / C(n, k+1)."""
    W = _nonempty(W)
    return Fraction(exact_face_count(W, k, limit), comb(len(W), k + 1))


def simplex_face_fraction(W, k: int, limit: int = EXACT_LIMIT) -> Fraction:
    """Share of (k+1)-subsets of W whose hull is a k-face (faces with exactly k+1 vertices)."""
    W = _nonempty(W)
    simplices = sum(1 for F in face_list(W, k, limit) if len(F) == k + 1)
    return Fraction(simplices, comb(len(W), k + 1))


# ------------------------------------------------------------ events


def in_affine_hull(W: np.ndarray, T: np.ndarray) -> np.ndarray:
    """Mask of rows of W lying in aff T."""
    t0 = T[0].astype(np.int64)
    diffs = (T[1:].astype(np.int64) - t0).tolist()
    normals = nullspace(diffs, W.shape[1]) if diffs else np.eye(W.shape[1], dtype=np.int64).tolist()
    if not normals:
        return np.ones(len(W), dtype=bool)
    shifted = W.astype(np.int64) - t0
    inside = np.ones(len(W), dtype=bool)
    for nrm in normals:
        inside &= int_dot(shifted, nrm) == 0
    return inside


def face_lower(W: np.ndarray, t_idx, k: int) -> bool:
    t_idx = np.asarray(t_idx)
    T = W[t_idx]
    if affine_rank(T) != k + 1:
        return False
    rest = np.ones(len(W), dtype=bool)
    rest[t_idx] = False
    return is_face(T, W[rest]).verdict


def aff_upper(W: np.ndarray, t_idx) -> bool:
    # P meets aff T in a face iff the points of W in aff T span a face of P
    inside = in_affine_hull(W, W[np.asarray(t_idx)])
    return is_face(W[inside], W[~inside]).verdict


def evaluate_event(event: EventKind, W: np.ndarray, t_idx, k: int) -> bool:
    event = EventKind(event)
    if event is EventKind.FACE_LOWER:
        return face_lower(W, t_idx, k)
    return aff_upper(W, t_idx)


# ------------------------------------------------------------ intervals


def wilson_interval(successes: int, trials: int, level: float = LEVEL) -> tuple[float, float]:
    if trials < 1:
        raise ValueError("need at least one trial")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    if not 0 < level < 1:
        raise ValueError("level must lie in (0, 1)")
    z = float(norm.ppf(0.5 + level / 2))
    p = successes / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * np.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    low = 0.0 if successes == 0 else max(0.0, centre - half)
    high = 1.0 if successes == trials else min(1.0, centre + half)
    return float(low), float(high)


def bootstrap_interval(per_trial: list[tuple[int, int]], seed: int, level: float = LEVEL):
    """Percentile interval from resampling whole trials (keeps the within-W correlation)."""
    rng = SeededStream(seed, BOOTSTRAP_STREAM).generator()
    succ = np.array([s for s, _ in per_trial], dtype=float)
    tot = np.array([t for _, t in per_trial], dtype=float)
    idx = rng.integers(0, len(per_trial), size=(BOOTSTRAP_ROUNDS, len(per_trial)))
    ratios = succ[idx].sum(axis=1) / tot[idx].sum(axis=1)
    tail = (1 - level) / 2
    return float(np.quantile(ratios, tail)), float(np.quantile(ratios, 1 - tail))


# ------------------------------------------------------------ Monte Carlo


def _trial(args) -> tuple[int, int]:
    d, n, k, event, subsets, seed, stream, exhaustive = args
    gen = SeededStream(seed, stream).generator()
    W = sample_model1(d, n, gen)
    if exhaustive:
        if comb(n, k + 1) > EXHAUSTIVE_SUBSETS:
            raise LimitExceeded(f"C({n}, {k + 1}) subsets exceed {EXHAUSTIVE_SUBSETS}")
        chosen = [np.array(T) for T in combinations(range(n), k + 1)]
    else:
        chosen = random_subsets(n, k + 1, subsets, gen)
    hits = sum(evaluate_event(event, W, T, k) for T in chosen)
    return int(hits), len(chosen)


def _run(fn, jobs: list, workers: int) -> list:
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def _pool(name: str, per_trial, d, n, k, subsets, seed, bootstrap, level) -> DensityEstimate:
    hits = sum(s for s, _ in per_trial)
    total = sum(t for _, t in per_trial)
    low, high = (
        bootstrap_interval(per_trial, seed, level) if bootstrap else wilson_interval(hits, total, level)
    )
    est = hits / total
    low, high = min(low, est), max(high, est)
    return DensityEstimate(
        name,
        est, low, high, len(per_trial), subsets, d, n, k, seed, hits, total, level,
    )


def _check_n(d: int, n: int, k: int) -> None:
    if d < 1:
        raise InfeasibleConfig("d must be positive")
    if d < 63 and n > 2**d:
        raise InfeasibleConfig(f"n = {n} exceeds 2^{d}")
    if n < k + 1:
        raise InfeasibleConfig(f"n = {n} is too small for {k + 1}-subsets")


def estimate_event(
    d: int,
    n: int,
    k: int,
    event,
    trials: int,
    subsets_per_trial: int,
    seed: int,
    *,
    first_stream: int = 0,
    workers: int = 1,
    exhaustive: bool = False,
    bootstrap: bool = False,
    level: float = LEVEL,
) -> DensityEstimate:
    """Pooled frequency of the event over trials x subsets.

    Trial t draws W and its subsets from stream ``first_stream + t``.
    """
    event = EventKind(event)
    _check_n(d, n, k)
    if trials < 1 or subsets_per_trial < 1:
        raise InfeasibleConfig("trials and subsets_per_trial must be positive")
    jobs = [
        (d, n, k, event, subsets_per_trial, seed, first_stream + t, exhaustive) for t in range(trials)
    ]
    per_trial = _run(_trial, jobs, workers)
    return _pool(event.value, per_trial, d, n, k, subsets_per_trial, seed, bootstrap, level)


def _spanning_trial(args) -> tuple[int, int]:
    d, n, r, branch, seed, stream = args
    S, X = sample_conditioned_spanning(d, n, r, SeededStream(seed, stream).generator())
    if branch == 1:
        return int(is_face(S, X).verdict), 1
    V = np.vstack([S, X])
    # a lower-dimensional P is its own boundary
    if not is_full_dimensional(V):
        return 1, 1
    return int(conv_in_boundary(S, X)), 1


def estimate_spanning_event(
    d: int,
    n: int,
    r: int,
    branch: int,
    trials: int,
    seed: int,
    *,
    first_stream: int = 0,
    workers: int = 1,
    level: float = LEVEL,
) -> DensityEstimate:
    """Branch 1: conv S is a face of P.  Branch 2: conv S lies in the boundary of P."""
    if branch not in (1, 2):
        raise ValueError("branch must be 1 or 2")
    if r < 3:
        raise InfeasibleConfig("need r >= 3")
    if n <= r:
        raise InfeasibleConfig(f"need n > r = {r}")
    _check_n(d, n, r - 1)
    if trials < 1:
        raise InfeasibleConfig("trials must be positive")
    jobs = [(d, n, r, branch, seed, first_stream + t) for t in range(trials)]
    per_trial = _run(_spanning_trial, jobs, workers)
    return _pool(f"SPANNING_{branch}", per_trial, d, n, r - 1, 1, seed, False, level)


def entropic_point(d: int, beta: float, gen: np.random.Generator, grid: int = 32) -> list[Fraction]:
    """Random rational point of [1/4, 3/4]^d with point entropy >= beta (by rejection)."""
    if not 0 < beta < 1:
        raise ValueError("beta must lie in (0, 1)")
    while True:
        steps = gen.integers(-grid // 4, grid // 4 + 1, size=d)
        z = [Fraction(grid // 2 + int(s), grid) for s in steps]
        if point_entropy(z) >= beta:
            return z


def dfm_membership(d: int, beta: float, trials: int, seed: int, slack: float = 0.2, workers: int = 1):
    """Fraction of trials in which a random high-entropy point lies in conv X.

    X is a model-1 sample of size 2^ceil((1 - beta + slack) d).
    """
    # exact decimal arithmetic: 1 - 0.95 + 0.2 is not 0.25 in binary floating point
    expo = (1 - Fraction(str(beta)) + Fraction(str(slack))) * d
    n = 2 ** math.ceil(expo)
    jobs = [(d, n, beta, seed, t) for t in range(trials)]
    hits = sum(_run(_dfm_trial, jobs, workers))
    return hits / trials, n


def _dfm_trial(args) -> int:
    d, n, beta, seed, stream = args
    gen = SeededStream(seed, stream).generator()
    X = sample_model1(d, n, gen)
    z = entropic_point(d, beta, gen)
    return int(is_in_hull(z, X))
