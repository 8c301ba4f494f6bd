"""Binary entropy and the threshold constants built from it.

All real-valued results are ``mpmath.mpf`` computed with ``PREC`` bits of
working precision; convert with ``float()`` at the edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, floor
from typing import Iterable

import mpmath

PREC = 128


def _mpf(x) -> mpmath.mpf:
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _open_unit(x) -> None:
    if not 0 < x < 1:
        raise ValueError(f"argument must lie in (0, 1), got {x}")


def binary_entropy(xi) -> mpmath.mpf:
    """h(xi) = xi log2(1/xi) + (1 - xi) log2(1/(1 - xi)) for 0 < xi < 1."""
    _open_unit(xi)
    with mpmath.workprec(PREC):
        x = _mpf(xi)
        return -x * mpmath.log(x, 2) - (1 - x) * mpmath.log(1 - x, 2)


def capital_h(r: int) -> mpmath.mpf:
    """The entropy average H_r = (2^r - 2)^-1 * sum_{i=1}^{r-1} C(r, i) h(i/r)."""
    if r < 2:
        raise ValueError("r must be at least 2")
    with mpmath.workprec(PREC):
        total = mpmath.fsum(comb(r, i) * binary_entropy(Fraction(i, r)) for i in range(1, r))
        return total / (2**r - 2)


def capital_h_paired(r: int) -> mpmath.mpf:
    """H_r summed over the pairs i <-> r - i (each pair counted once, doubled)."""
    if r < 2:
        raise ValueError("r must be at least 2")
    with mpmath.workprec(PREC):
        terms = []
        for i in range(1, r // 2 + 1):
            t = comb(r, i) * binary_entropy(Fraction(i, r))
            terms.append(t if 2 * i == r else 2 * t)
        return mpmath.fsum(terms) / (2**r - 2)


def tau(k: int) -> mpmath.mpf:
    """Face-density threshold exponent tau_k = 1 - (1 - 2^-k) H_{k+1}."""
    if k < 1:
        raise ValueError("k must be at least 1")
    with mpmath.workprec(PREC):
        return 1 - (1 - mpmath.mpf(2) ** (-k)) * capital_h(k + 1)


def spanning_threshold(r: int) -> mpmath.mpf:
    """The spanning-case exponent 1 - H_r."""
    with mpmath.workprec(PREC):
        return 1 - capital_h(r)


def point_entropy(z: Iterable) -> mpmath.mpf:
    """Mean coordinate-wise binary entropy of a point in the open cube."""
    z = list(z)
    if not z:
        raise ValueError("empty point")
    with mpmath.workprec(PREC):
        return mpmath.fsum(binary_entropy(x) for x in z) / len(z)


def binomial_tail(q: int, alpha) -> int:
    """Exact sum_{p=1}^{floor(alpha q)} C(q, p)."""
    top = floor(Fraction(alpha) * q) if not isinstance(alpha, float) else floor(alpha * q)
    if q < 1 or top < 1:
        raise ValueError("need q >= 1 and floor(alpha*q) >= 1")
    top = min(top, q)
    return sum(comb(q, p) for p in range(1, top + 1))


def log2_binomial_tail(q: int, alpha) -> mpmath.mpf:
    """log2 of the exact big-integer sum ``binomial_tail(q, alpha)``."""
    s = binomial_tail(q, alpha)
    with mpmath.workprec(PREC):
        return mpmath.log(mpmath.mpf(s), 2)


@dataclass(frozen=True)
class ThresholdRow:
    k: int
    r: int
    H_r: mpmath.mpf
    tau_k: mpmath.mpf


def threshold_table(k_max: int) -> list[ThresholdRow]:
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    return [ThresholdRow(k, k + 1, capital_h(k + 1), tau(k)) for k in range(1, k_max + 1)]
