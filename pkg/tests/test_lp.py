from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linprog as highs

from facedensity import lp


def test_simple_optimum():
    # max x + y s.t. x + 2y <= 4, 3x + y <= 6
    res = lp.linprog([1, 1], [[1, 2], [3, 1]], [4, 6])
    assert res.status == lp.OPTIMAL
    assert res.objective == Fraction(14, 5)
    assert res.x == [Fraction(8, 5), Fraction(6, 5)]


def test_infeasible_and_unbounded():
    assert lp.linprog([0], [[1]], [-1]).status == lp.INFEASIBLE
    assert lp.linprog([1], [[-1]], [0]).status == lp.UNBOUNDED
    assert lp.linprog([1], A_eq=[[1]], b_eq=[-3], free=[0]).objective == -3


def test_redundant_equalities():
    res = lp.linprog([1, 0], A_ub=[[1, 1]], b_ub=[5], A_eq=[[1, -1], [2, -2]], b_eq=[1, 2])
    assert res.status == lp.OPTIMAL and res.objective == 3


def test_degenerate_cycling_example():
    # Beale's example cycles under the textbook rule; Bland's rule terminates
    c = [Fraction(3, 4), -150, Fraction(1, 50), -6]
    A = [[Fraction(1, 4), -60, Fraction(-1, 25), 9], [Fraction(1, 2), -90, Fraction(-1, 50), 3], [0, 0, 1, 0]]
    res = lp.linprog(c, A, [0, 0, 1])
    assert res.status == lp.OPTIMAL and res.objective == Fraction(1, 20)


def test_large_entries_switch_to_python_ints():
    big = 10**12
    res = lp.linprog([1, 1], [[big, 1], [1, big]], [big, big])
    assert res.objective == Fraction(2 * big, big + 1)


lp_cases = st.integers(1, 6).flatmap(
    lambda n: st.tuples(
        st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=1, max_size=7),
        st.lists(st.integers(-3, 6), min_size=7, max_size=7),
        st.lists(st.integers(-3, 3), min_size=n, max_size=n),
        st.booleans(),
    )
)


@given(lp_cases)
def test_agrees_with_highs(case):
    A, b, c, free_first = case
    b = b[: len(A)]
    free = [0] if free_first else []
    bounds = [(None, None) if j in free else (0, None) for j in range(len(c))]
    ref = highs(-np.array(c), A_ub=A, b_ub=b, bounds=bounds, method="highs")
    res = lp.linprog(c, A, b, free=free)
    status = {0: lp.OPTIMAL, 2: lp.INFEASIBLE, 3: lp.UNBOUNDED}[ref.status]
    assert res.status == status
    if status == lp.OPTIMAL:
        assert abs(float(res.objective) + ref.fun) < 1e-7
        x = res.x
        for row, bi in zip(A, b):
            assert sum(Fraction(a) * xi for a, xi in zip(row, x)) <= bi
        assert all(xi >= 0 for j, xi in enumerate(x) if j not in free)
