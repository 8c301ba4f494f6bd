from collections import Counter
from itertools import combinations

import numpy as np
import pytest
from scipy.stats import chisquare, ttest_ind

from facedensity.cube import is_spanning, pack_codes
from facedensity.sampler import (
    SeededStream,
    random_subsets,
    sample_conditioned_spanning,
    sample_model1,
    sample_model2,
    uniform_points,
)


def test_stream_determinism():
    a = uniform_points(10, 5, SeededStream(3, 7))
    b = uniform_points(10, 5, SeededStream(3, 7))
    c = uniform_points(10, 5, SeededStream(3, 8))
    assert (a == b).all()
    assert not (a == c).all()


def test_stream_validation():
    with pytest.raises(ValueError):
        SeededStream(-1)
    with pytest.raises(ValueError):
        SeededStream(0, 2**64)
    with pytest.raises(TypeError):
        uniform_points(3, 2, 42)


def test_model2_shapes_and_errors():
    S, X = sample_model2(6, 10, 3, SeededStream(1))
    assert S.shape == (3, 6) and X.shape == (7, 6)
    with pytest.raises(ValueError):
        sample_model2(6, 3, 3, SeededStream(1))


def test_model2_coordinate_mean():
    means = [np.concatenate(sample_model2(30, 1000, 3, SeededStream(5, s))).mean() for s in range(20)]
    assert abs(np.mean(means) - 0.5) < 0.01


def test_model2_distinct_rows_for_large_d():
    distinct = sum(len({bytes(r) for r in sample_model2(60, 4, 3, SeededStream(2, s))[0]}) == 3 for s in range(200))
    assert distinct == 200


@pytest.mark.parametrize("d,n", [(4, 3), (6, 64), (10, 40), (10, 1000), (70, 5)])
def test_model1_distinct(d, n):
    W = sample_model1(d, n, SeededStream(9, d))
    assert W.shape == (n, d)
    assert len({bytes(r) for r in W}) == n


def test_model1_full_cube():
    W = sample_model1(4, 16, SeededStream(0))
    assert sorted(pack_codes(W)) == list(range(16))
    with pytest.raises(ValueError):
        sample_model1(4, 17, SeededStream(0))


@pytest.mark.parametrize("d,n", [(2, 2), (3, 6)])
def test_model1_uniform_over_subsets(d, n):
    trials = 30000 if d == 2 else 56000
    counts = Counter()
    for s in range(trials):
        counts[tuple(sorted(pack_codes(sample_model1(d, n, SeededStream(11, s)))))] += 1
    subsets = list(combinations(range(2**d), n))
    freq = np.array([counts[c] for c in subsets])
    assert len(counts) == len(subsets)
    if d == 2:
        assert np.all(np.abs(freq / trials - 1 / 6) < 0.02)
    assert chisquare(freq).pvalue > 1e-3


def test_conditioned_spanning():
    for s in range(50):
        S, X = sample_conditioned_spanning(8, 12, 3, SeededStream(4, s))
        assert is_spanning(S)
        assert X.shape == (9, 8)
    S, X = sample_conditioned_spanning(100000, 4, 3, SeededStream(4))
    codes = (S.astype(int) * np.array([[1], [2], [4]])).sum(axis=0)
    freq = np.bincount(codes, minlength=8) / codes.size
    assert freq[0] == 0 and freq[7] == 0
    assert np.all(np.abs(freq[1:7] - 1 / 6) < 0.01)
    assert abs(X.mean() - 0.5) < 0.01


def test_random_subsets():
    subs = random_subsets(4, 4, 5, SeededStream(1))
    assert all(s.tolist() == [0, 1, 2, 3] for s in subs)
    draws = random_subsets(4, 2, 60000, SeededStream(1))
    counts = Counter(tuple(s.tolist()) for s in draws)
    assert len(counts) == 6
    assert all(abs(c / 60000 - 1 / 6) < 0.02 for c in counts.values())
    again = random_subsets(np.zeros((4, 2)), 2, 10, SeededStream(1))
    assert [a.tolist() for a in again] == [b.tolist() for b in draws[:10]]
    with pytest.raises(ValueError):
        random_subsets(3, 4, 1, SeededStream(1))


def test_disjoint_streams_agree():
    # coordinate means from two disjoint stream ranges are statistically the same
    a = np.array([uniform_points(40, 50, SeededStream(8, s)).mean() for s in range(200)])
    b = np.array([uniform_points(40, 50, SeededStream(8, s)).mean() for s in range(1000, 1200)])
    assert ttest_ind(a, b).pvalue > 0.01
