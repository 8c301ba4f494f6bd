from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from facedensity.cube import (
    CubeFace,
    CubePoint,
    all_vertices,
    barycenter,
    classify_columns,
    count_in_face,
    is_spanning,
    smallest_cube_face,
    spanning_dimension,
    spanning_dimensions,
)
from facedensity.shallowcut import build_instance

point_sets = st.integers(1, 12).flatmap(
    lambda d: st.lists(st.lists(st.integers(0, 1), min_size=d, max_size=d), min_size=1, max_size=6)
)


def test_cubepoint_roundtrip():
    p = CubePoint.from_coords([1, 0, 1, 1, 0, 0, 0, 1, 1])
    assert p.d == 9
    assert p.coords().tolist() == [1, 0, 1, 1, 0, 0, 0, 1, 1]
    # little-endian nibbles: coords 0..3 -> 0b1101 = d, 4..7 -> 0b1000 = 8, 8 -> 1
    assert p.to_hex() == "d81"
    assert CubePoint.from_hex(9, "d81") == p
    assert CubePoint.from_json(p.to_json()) == p


def test_cubepoint_validation():
    with pytest.raises(ValueError):
        CubePoint.from_coords([0, 2])
    with pytest.raises(ValueError):
        CubePoint(2, 4)
    with pytest.raises(ValueError):
        CubePoint.from_hex(5, "1")


@given(st.integers(1, 70).flatmap(lambda d: st.tuples(st.just(d), st.integers(0, 2**d - 1))))
def test_hex_roundtrip_property(args):
    d, bits = args
    p = CubePoint(d, bits)
    assert len(p.to_hex()) == (d + 3) // 4
    assert CubePoint.from_hex(d, p.to_hex()) == p
    assert CubePoint.from_coords(p.coords().tolist()) == p


def test_smallest_face_examples():
    F = smallest_cube_face([[0, 0, 0], [1, 1, 1]])
    assert F.fixed == () and F.dim == 3
    F = smallest_cube_face([[0, 0], [0, 1]])
    assert F.fixed == (0,) and F.values == (0,) and F.dim == 1
    F = smallest_cube_face([[1, 0, 1]])
    assert F.dim == 0 and F.values == (1, 0, 1)


def test_smallest_face_errors():
    with pytest.raises(ValueError):
        smallest_cube_face([])
    with pytest.raises(ValueError):
        smallest_cube_face([CubePoint(2, 1), CubePoint(3, 1)])


def test_spanning_examples():
    assert spanning_dimension([[0, 0, 0], [1, 1, 1]]) == 3
    assert spanning_dimension([[0, 0], [0, 1]]) == 1
    assert spanning_dimension([[1, 0, 1]]) == 0
    assert is_spanning([[0, 0, 0], [1, 1, 1]])
    assert not is_spanning([[0, 0], [0, 1]])
    for r, m in [(3, 1), (3, 2), (4, 1)]:
        assert is_spanning(build_instance(r, m).rows())


@given(point_sets)
def test_smallest_face_is_minimal(S):
    S = np.array(S, dtype=np.uint8)
    F = smallest_cube_face(S)
    assert F.contains(S).all()
    d = S.shape[1]
    # brute force: every cube face containing S fixes a subset of F's fixed coordinates
    for j in range(d):
        column_agrees = len(set(S[:, j].tolist())) == 1
        assert (j in F.fixed) == column_agrees
    assert spanning_dimension(S) == d - len(F.fixed)


@given(point_sets, st.data())
def test_monotone_under_inclusion(S, data):
    S = np.array(S, dtype=np.uint8)
    k = data.draw(st.integers(1, len(S)))
    sub = S[:k]
    assert spanning_dimension(sub) <= spanning_dimension(S)
    assert set(smallest_cube_face(S).fixed) <= set(smallest_cube_face(sub).fixed)


def test_spanning_dimensions_batch():
    rng = np.random.default_rng(0)
    batch = rng.integers(0, 2, size=(50, 3, 9), dtype=np.uint8)
    assert spanning_dimensions(batch).tolist() == [spanning_dimension(b) for b in batch]


def test_classify_columns_A1():
    rows = build_instance(3, 1).rows()
    cc = classify_columns(rows)
    assert all(len(cc.classes[t]) == 1 for t in cc.patterns)
    assert cc.m == 1
    assert cc.delta_max == 0
    assert cc.pi == Fraction(1, 6)


def test_classify_columns_single_pattern():
    S = np.array([[1] * 6, [0] * 6, [0] * 6], dtype=np.uint8)
    cc = classify_columns(S)
    assert len(cc.classes[1]) == 6
    assert cc.m == 0
    assert cc.delta_max == 5


def test_classify_columns_constant_side_channel():
    S = np.array([[0, 1, 1, 0], [0, 1, 0, 1], [0, 1, 0, 0]], dtype=np.uint8)
    cc = classify_columns(S)
    assert cc.constant_zero == (0,) and cc.constant_one == (1,)
    assert sum(len(v) for v in cc.classes.values()) + 2 == 4
    with pytest.raises(ValueError):
        classify_columns(S[:2])


@given(st.integers(3, 5).flatmap(lambda r: st.lists(st.lists(st.integers(0, 1), min_size=r, max_size=r), min_size=1, max_size=20)))
def test_classify_partition(cols):
    S = np.array(cols, dtype=np.uint8).T
    cc = classify_columns(S)
    seen = sorted(j for v in cc.classes.values() for j in v) + list(cc.constant_zero) + list(cc.constant_one)
    assert sorted(seen) == list(range(S.shape[1]))
    for t, J in cc.classes.items():
        for j in J:
            assert sum(int(S[i, j]) << i for i in range(S.shape[0])) == t


def test_selected_lowest_index():
    S = np.array([[1, 0, 1, 0, 1, 1, 0, 1], [0, 1, 0, 1, 1, 0, 1, 1], [0, 0, 0, 0, 0, 1, 1, 1]], dtype=np.uint8)
    cc = classify_columns(S)
    assert cc.classes[1] == (0, 2)
    with pytest.raises(ValueError):
        cc.selected(1)  # some pattern is missing, m = 0


def test_count_in_face():
    F = CubeFace(3, (1,), (0,))
    assert count_in_face(all_vertices(3), F) == 4
    assert count_in_face(np.zeros((0, 3), dtype=np.uint8), F) == 0
    with pytest.raises(ValueError):
        F.contains(np.zeros((1, 2), dtype=np.uint8))


def test_barycenter():
    assert barycenter([[0, 0, 0], [1, 1, 1]]) == (Fraction(1, 2),) * 3
    assert barycenter([[1, 0, 1]]) == (1, 0, 1)
    inst = build_instance(3, 1)
    b = barycenter(inst.rows())
    for i, L in enumerate(inst.classes, start=1):
        assert all(b[j] == Fraction(i, 3) for j in L)
    with pytest.raises(ValueError):
        barycenter([])


def test_delta_max_concentration():
    # |J(t)| ~ Bin(d, 1/6) for each of the 6 patterns of a spanning 3-row S, sd = sqrt(d * 5/36).
    # Union bound over 6 patterns and both tails gives the 99.9% quantile of delta_max / sqrt(d).
    from scipy.stats import norm

    from facedensity.sampler import SeededStream, sample_conditioned_spanning

    d, trials = 400, 10_000
    C = norm.ppf(1 - 0.001 / 12) * np.sqrt(5 / 36)
    over = 0
    for t in range(trials):
        S, _ = sample_conditioned_spanning(d, 4, 3, SeededStream(31, t))
        over += classify_columns(S).delta_max > C * np.sqrt(d)
    rate = over / trials
    assert rate <= 0.001 + 3 * np.sqrt(0.001 * 0.999 / trials)
