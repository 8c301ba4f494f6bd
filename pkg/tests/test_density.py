from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from facedensity.cube import all_vertices
from facedensity.density import (
    DensityEstimate,
    EventKind,
    _spanning_trial,
    aff_upper,
    bootstrap_interval,
    dfm_membership,
    entropic_point,
    estimate_event,
    estimate_spanning_event,
    exact_face_count,
    exact_face_density,
    face_list,
    face_lower,
    in_affine_hull,
    simplex_face_fraction,
    wilson_interval,
)
from facedensity.entropy import point_entropy
from facedensity.errors import InfeasibleConfig, LimitExceeded
from facedensity.geometry import is_face
from facedensity.instances import cut_polytope_k4, simplex
from facedensity.oracle import FaceLattice
from facedensity.sampler import SeededStream, sample_model1

SQUARE = all_vertices(2)
TRIANGLE = np.array([[0, 0], [0, 1], [1, 0]])


def test_exact_counts():
    assert exact_face_count(SQUARE, 1) == 4
    C = all_vertices(3)
    assert exact_face_count(C, 1) == 12
    assert exact_face_count(C, 2) == 6
    assert exact_face_count(TRIANGLE, 1) == 3


def test_exact_densities():
    assert exact_face_density(SQUARE, 1) == Fraction(2, 3)
    assert exact_face_density(all_vertices(3), 1) == Fraction(3, 7)
    for d in (2, 3, 5):
        for k in range(d):
            assert exact_face_density(simplex(d), k) == 1
    W = cut_polytope_k4()
    assert exact_face_density(W, 1) == exact_face_density(W, 2) == 1


def test_exact_errors():
    with pytest.raises(ValueError):
        exact_face_count(SQUARE, 2)
    with pytest.raises(LimitExceeded):
        exact_face_count(all_vertices(5), 1)
    with pytest.raises(ValueError):
        exact_face_count(np.vstack([SQUARE, SQUARE[:1]]), 1)


@settings(max_examples=40)
@given(
    st.integers(3, 5).flatmap(
        lambda d: st.sets(st.integers(0, 2**d - 1), min_size=4, max_size=min(10, 2**d)).map(
            lambda c: np.array([[(x >> j) & 1 for j in range(d)] for x in sorted(c)])
        )
    )
)
def test_face_list_matches_oracle(W):
    L = FaceLattice(W)
    for k in range(L.dim):
        assert face_list(W, k) == L.faces_of_dim(k)


def test_events_on_square():
    assert face_lower(SQUARE, [0, 1], 1)
    assert not face_lower(SQUARE, [0, 3], 1)
    assert aff_upper(SQUARE, [0, 1])
    assert not aff_upper(SQUARE, [0, 3])


def test_affinely_dependent_subset_fails_face_lower():
    W = all_vertices(4)
    square = [0, 1, 2, 3]  # the 2-face x3 = x4 = 0 has 4 coplanar vertices
    assert is_face(W[square], W[4:]).verdict
    assert not face_lower(W, square, 3)
    assert face_lower(W, [0, 1, 2], 2) is False  # a triangle inside the square face


def test_aff_upper_encoding_matches_minimal_face_definition():
    # P meets aff T in a face  <=>  the minimal face of T has all vertices in aff T
    for t in range(15):
        W = sample_model1(5, 10, SeededStream(9, t))
        L = FaceLattice(W)
        for T in combinations(range(10), 2):
            inside = in_affine_hull(W, W[list(T)])
            expected = set(L.minimal_face(T)) <= set(np.flatnonzero(inside).tolist())
            assert aff_upper(W, np.array(T)) == expected


def test_in_affine_hull():
    W = all_vertices(3)
    mask = in_affine_hull(W, W[[0, 1]])
    assert mask.tolist() == [True, True] + [False] * 6
    assert in_affine_hull(W, W[[0, 1, 2]]).sum() == 4


def test_wilson():
    assert wilson_interval(0, 20)[0] == 0
    assert wilson_interval(20, 20)[1] == 1
    low, high = wilson_interval(50, 100)
    # closed form with z = 1.959964
    z = 1.959963984540054
    centre = (0.5 + z * z / 200) / (1 + z * z / 100)
    half = z * np.sqrt(0.25 / 100 + z * z / 40000) / (1 + z * z / 100)
    assert low == pytest.approx(centre - half, abs=1e-12) and high == pytest.approx(centre + half, abs=1e-12)
    assert round(low, 3) == 0.404 and round(high, 3) == 0.596
    for bad in [(1, 0, 0.95), (5, 4, 0.95), (-1, 4, 0.95), (1, 4, 1.0)]:
        with pytest.raises(ValueError):
            wilson_interval(*bad)


def test_estimate_fields():
    e = estimate_event(8, 20, 1, "FACE_LOWER", 3, 10, 1)
    assert isinstance(e, DensityEstimate)
    assert e.ci_low <= e.estimate <= e.ci_high
    assert (e.trials, e.subsets, e.total) == (3, 10, 30)
    assert e.to_dict()["event"] == "FACE_LOWER"


def test_estimate_errors():
    with pytest.raises(InfeasibleConfig):
        estimate_event(3, 9, 1, "FACE_LOWER", 1, 1, 0)
    with pytest.raises(InfeasibleConfig):
        estimate_event(3, 4, 1, "FACE_LOWER", 0, 1, 0)
    with pytest.raises(ValueError):
        estimate_event(3, 4, 1, "NOPE", 1, 1, 0)


@pytest.mark.parametrize("d,n,k", [(4, 8, 1), (5, 10, 1), (5, 10, 2), (3, 6, 1)])
def test_exhaustive_agreement(d, n, k):
    for t in range(4):
        e = estimate_event(d, n, k, "FACE_LOWER", 1, 1, 17, first_stream=t, exhaustive=True)
        W = sample_model1(d, n, SeededStream(17, t))
        assert e.total == comb(n, k + 1)
        assert Fraction(e.successes, e.total) == simplex_face_fraction(W, k)


def test_exhaustive_d10_matches_edge_density():
    e = estimate_event(10, 12, 1, "FACE_LOWER", 1, 1, 3, exhaustive=True)
    W = sample_model1(10, 12, SeededStream(3, 0))
    # every pair of 0/1 points is affinely independent, so edges are exactly 2-point faces
    assert Fraction(e.successes, e.total) == exact_face_density(W, 1)


@pytest.mark.parametrize("d,n,k", [(4, 9, 1), (5, 10, 2), (4, 10, 2)])
def test_bound_sandwich(d, n, k):
    for t in range(4):
        lo = estimate_event(d, n, k, "FACE_LOWER", 1, 1, 5, first_stream=t, exhaustive=True)
        hi = estimate_event(d, n, k, "AFF_UPPER", 1, 1, 5, first_stream=t, exhaustive=True)
        W = sample_model1(d, n, SeededStream(5, t))
        phi = exact_face_density(W, k)
        assert Fraction(lo.successes, lo.total) <= phi <= Fraction(hi.successes, hi.total)


def test_face_lower_below_aff_upper_monte_carlo():
    lo = estimate_event(12, 200, 1, "FACE_LOWER", 6, 20, 8)
    hi = estimate_event(12, 200, 1, "AFF_UPPER", 6, 20, 8)
    se = np.sqrt(lo.estimate * (1 - lo.estimate) / lo.total + hi.estimate * (1 - hi.estimate) / hi.total)
    assert lo.estimate <= hi.estimate + 3 * se


def test_exhaustive_limit():
    with pytest.raises(LimitExceeded):
        estimate_event(20, 2000, 2, "FACE_LOWER", 1, 1, 0, exhaustive=True)


def test_determinism_across_workers():
    one = estimate_event(10, 40, 1, "FACE_LOWER", 4, 10, 99, workers=1)
    two = estimate_event(10, 40, 1, "FACE_LOWER", 4, 10, 99, workers=2)
    assert one == two
    assert one == estimate_event(10, 40, 1, "FACE_LOWER", 4, 10, 99)


def test_bootstrap_interval():
    per_trial = [(3, 10), (5, 10), (4, 10), (6, 10), (2, 10)]
    low, high = bootstrap_interval(per_trial, seed=4)
    assert low <= 0.4 <= high
    assert (low, high) == bootstrap_interval(per_trial, seed=4)
    e = estimate_event(8, 30, 1, "FACE_LOWER", 5, 8, 2, bootstrap=True)
    assert e.ci_low <= e.estimate <= e.ci_high


def test_spanning_branch_one_implies_branch_two():
    seen = 0
    for t in range(25):
        b1, _ = _spanning_trial((8, 12, 3, 1, 6, t))
        b2, _ = _spanning_trial((8, 12, 3, 2, 6, t))
        if b1:
            seen += 1
            assert b2
    assert seen > 0


def test_spanning_estimate():
    e = estimate_spanning_event(10, 8, 3, 1, 10, 1)
    assert e.event == "SPANNING_1" and e.total == 10 and e.k == 2
    with pytest.raises(ValueError):
        estimate_spanning_event(10, 8, 3, 3, 10, 1)
    with pytest.raises(InfeasibleConfig):
        estimate_spanning_event(10, 8, 2, 1, 10, 1)
    with pytest.raises(InfeasibleConfig):
        estimate_spanning_event(10, 3, 3, 1, 10, 1)


def test_entropic_point():
    gen = np.random.default_rng(0)
    z = entropic_point(12, 0.95, gen)
    assert point_entropy(z) >= 0.95
    assert all(Fraction(1, 4) <= v <= Fraction(3, 4) for v in z)


def test_dfm_sample_size():
    # 1 - 0.95 + 0.2 must be 1/4 exactly, not a float just above it
    assert dfm_membership(24, 0.95, 1, 0)[1] == 2**6


def test_dfm_membership():
    fraction, n = dfm_membership(24, 0.95, 30, 2024)
    print(f"DFM: {fraction:.3f} of high-entropy points inside conv X with n = {n}")
    assert fraction >= 0.9
