"""Shallow cuts through the rows of the pattern matrix A(m).

A(m) is the r x M matrix whose columns are m copies of every non-constant
0/1 pattern of length r.  Columns are grouped into classes L(i) by the
number i of ones in their pattern, and the inequality

    sum_i alpha_i * (number of ones of xi in L(i))  <=  a0

with ``alpha_i = ln((r - i) / i)`` passes through all r rows.  Its 0/1
solutions are counted exactly by summing products of binomials over the box
of class counts ``l``.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb, prod

import mpmath
import numpy as np

from .cube import ColumnClassification
from .errors import LimitExceeded
from .geometry import Halfspace

ENUM_LIMIT = 10**8
LIFT_BITS = 40
_PREC = 200
BRUTE_LIMIT = 20


@dataclass(frozen=True)
class ShallowCutInstance:
    r: int
    m: int

    def __post_init__(self):
        if self.r < 3:
            raise ValueError("shallow cuts need r >= 3")
        if self.m < 1:
            raise ValueError("m must be positive")

    @property
    def M(self) -> int:
        return (2**self.r - 2) * self.m

    @property
    def class_sizes(self) -> tuple[int, ...]:
        """M_i for i = 1..r-1."""
        return tuple(comb(self.r, i) * self.m for i in range(1, self.r))

    @property
    def sigma(self) -> tuple[int, ...]:
        # (i/r) C(r,i) m = C(r-1,i-1) m, always an integer
        return tuple(comb(self.r - 1, i - 1) * self.m for i in range(1, self.r))

    @property
    def alpha(self) -> tuple[mpmath.mpf, ...]:
        with mpmath.workprec(_PREC):
            return tuple(mpmath.log(mpmath.mpf(self.r - i) / i) for i in range(1, self.r))

    @property
    def a0(self) -> mpmath.mpf:
        with mpmath.workprec(_PREC):
            return mpmath.fsum(a * s for a, s in zip(self.alpha, self.sigma))

    @cached_property
    def patterns(self) -> np.ndarray:
        """Pattern code of each column (bit k = row k)."""
        return np.repeat(np.arange(1, 2**self.r - 1, dtype=np.int64), self.m)

    @cached_property
    def classes(self) -> tuple[tuple[int, ...], ...]:
        """L(1), ..., L(r-1) as column index tuples."""
        weight = np.array([bin(int(t)).count("1") for t in self.patterns])
        return tuple(tuple(int(j) for j in np.flatnonzero(weight == i)) for i in range(1, self.r))

    def rows(self) -> np.ndarray:
        """The r x M matrix A(m)."""
        k = np.arange(self.r, dtype=np.int64)[:, None]
        return ((self.patterns[None, :] >> k) & 1).astype(np.uint8)

    def class_counts(self, xi) -> tuple[int, ...]:
        xi = np.asarray(xi)
        return tuple(int(xi[list(L)].sum()) for L in self.classes)


def build_instance(r: int, m: int) -> ShallowCutInstance:
    return ShallowCutInstance(r, m)


def omega(inst: ShallowCutInstance, l) -> int:
    """Number of 0/1 vectors with exactly l_i ones in L(i)."""
    l = [int(v) for v in l]
    if len(l) != inst.r - 1:
        raise ValueError(f"expected {inst.r - 1} class counts")
    if any(v < 0 for v in l):
        raise ValueError("class counts must be nonnegative")
    return prod(comb(Mi, li) for Mi, li in zip(inst.class_sizes, l))


def _below(r: int, excess) -> bool:
    """Exact test of prod_i ((r-i)/i)^excess_i <= 1."""
    num = den = 1
    for i, e in enumerate(excess, start=1):
        if e > 0:
            num *= (r - i) ** e
            den *= i**e
        elif e < 0:
            num *= i ** (-e)
            den *= (r - i) ** (-e)
    return num <= den


def _count_slice(args) -> int:
    r, m, lo, hi = args
    inst = ShallowCutInstance(r, m)
    sizes, sigma = inst.class_sizes, inst.sigma
    binoms = [[comb(Mi, k) for k in range(Mi + 1)] for Mi in sizes]
    total = 0
    rest = [range(Mi + 1) for Mi in sizes[1:]]
    for l1 in range(lo, hi):
        w1 = binoms[0][l1]
        for tail in itertools.product(*rest):
            l = (l1,) + tail
            if _below(r, [li - si for li, si in zip(l, sigma)]):
                total += w1 * prod(binoms[i][li] for i, li in enumerate(tail, start=1))
    return total


def box_size(inst: ShallowCutInstance) -> int:
    return prod(Mi + 1 for Mi in inst.class_sizes)


def count_solutions(inst: ShallowCutInstance, limit: int = ENUM_LIMIT, workers: int = 1) -> int:
    """Exact number of 0/1 solutions of the shallow-cut inequality."""
    size = box_size(inst)
    if size > limit:
        raise LimitExceeded(f"box has {size} points, limit is {limit}")
    M1 = inst.class_sizes[0]
    if workers <= 1:
        return _count_slice((inst.r, inst.m, 0, M1 + 1))
    edges = np.linspace(0, M1 + 1, min(workers, M1 + 1) + 1).astype(int)
    jobs = [(inst.r, inst.m, int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(_count_slice, jobs))


def brute_force_count(inst: ShallowCutInstance) -> int:
    """Count by enumerating all 2^M vectors (M <= 20), deciding with high-precision floats."""
    if inst.M > BRUTE_LIMIT:
        raise LimitExceeded(f"M = {inst.M} is too large for brute force")
    codes = np.arange(2**inst.M, dtype=np.int64)
    counts = []
    for L in inst.classes:
        c = np.zeros(len(codes), dtype=np.int64)
        for j in L:
            c += (codes >> j) & 1
        counts.append(c)
    keys, mult = np.unique(np.stack(counts, axis=1), axis=0, return_counts=True)
    total = 0
    with mpmath.workprec(_PREC):
        alpha, a0 = inst.alpha, inst.a0
        eps = mpmath.mpf(2) ** (-_PREC // 2)
        for key, k in zip(keys.tolist(), mult.tolist()):
            if mpmath.fsum(a * v for a, v in zip(alpha, key)) - a0 <= eps:
                total += k
    return total


def eta_tilde(inst: ShallowCutInstance, z) -> mpmath.mpf:
    """Continuous log-count sum_i [M_i ln M_i - z_i ln z_i - (M_i - z_i) ln(M_i - z_i)]."""
    with mpmath.workprec(_PREC):
        total = mpmath.mpf(0)
        for Mi, zi in zip(inst.class_sizes, z):
            zi = mpmath.mpf(zi)
            if not 0 <= zi <= Mi:
                raise ValueError("z outside the box")
            xlx = lambda x: x * mpmath.log(x) if x > 0 else mpmath.mpf(0)  # noqa: E731
            total += xlx(mpmath.mpf(Mi)) - xlx(zi) - xlx(Mi - zi)
        return total


def log2_count_rate(count: int, inst: ShallowCutInstance) -> float:
    """log2(count) / M."""
    return float(mpmath.log(count, 2) / inst.M)


def bound_slack(inst: ShallowCutInstance) -> float:
    """Allowed excess over H_r: 2 (r-1) log2(M+1) / M."""
    return 2 * (inst.r - 1) * float(mpmath.log(inst.M + 1, 2)) / inst.M


def gradient_check(inst: ShallowCutInstance, step: float | None = None) -> float:
    """Max relative error between central differences of eta_tilde at sigma and alpha.

    Coordinates with alpha_i = 0 are compared absolutely.
    """
    if step is None:
        step = 1e-4 * inst.m
    bound = min(min(s, Mi - s) for s, Mi in zip(inst.sigma, inst.class_sizes))
    if not 0 < step < bound:
        raise ValueError(f"step must lie in (0, {bound})")
    worst = 0.0
    with mpmath.workprec(_PREC):
        h = mpmath.mpf(step)
        base = [mpmath.mpf(s) for s in inst.sigma]
        for i, a in enumerate(inst.alpha):
            up, down = list(base), list(base)
            up[i] += h
            down[i] -= h
            fd = (eta_tilde(inst, up) - eta_tilde(inst, down)) / (2 * h)
            err = abs(fd - a) if a == 0 else abs(fd - a) / abs(a)
            worst = max(worst, float(err))
    return worst


def rational_alpha(inst: ShallowCutInstance, bits: int = LIFT_BITS) -> tuple[Fraction, ...]:
    """alpha rounded to multiples of 2^-bits, with alpha_{r-i} = -alpha_i kept exact."""
    r = inst.r
    scale = 2**bits
    out: dict[int, Fraction] = {}
    with mpmath.workprec(_PREC):
        for i, a in enumerate(inst.alpha, start=1):
            if i in out:
                continue
            if 2 * i == r:
                out[i] = Fraction(0)
                continue
            q = Fraction(int(mpmath.nint(a * scale)), scale)
            out[i] = q
            out[r - i] = -q
    return tuple(out[i] for i in range(1, r))


def lift_to_halfspace(
    inst: ShallowCutInstance, d: int, classification: ColumnClassification, bits: int = LIFT_BITS
) -> Halfspace:
    """Halfspace in R^d: alpha_i on the selected columns of every pattern with i ones, 0 elsewhere."""
    if classification.r != inst.r or classification.d != d:
        raise ValueError("classification does not match (r, d)")
    if classification.m < inst.m:
        raise ValueError(f"classification has only {classification.m} columns per pattern, need {inst.m}")
    coef = rational_alpha(inst, bits)
    a = [Fraction(0)] * d
    for t, cols in classification.selected(inst.m).items():
        w = bin(t).count("1")
        for j in cols:
            a[j] = coef[w - 1]
    a0 = sum((c * s for c, s in zip(coef, inst.sigma)), Fraction(0))
    return Halfspace(tuple(a), a0)
