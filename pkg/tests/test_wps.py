from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from qfano.wps import WeightedFamily, monomial_count, series


@pytest.mark.parametrize("weights,degrees,want", [
    ((1, 1, 1), (), [1, 3, 6, 10, 15, 21]),
    ((1, 1, 2), (), [1, 2, 4, 6, 9, 12]),
    ((1, 2, 3), (), [1, 1, 2, 3, 4, 5]),
    ((1, 2, 3, 5), (6,), [1, 1, 2, 3, 4, 6]),
    ((1, 1), (), [1, 2, 3, 4, 5, 6]),
])
def test_surface_series(weights, degrees, want):
    assert series(WeightedFamily(weights, degrees), 6) == want


def test_family_validation():
    with pytest.raises(ValueError):
        WeightedFamily((1, 2), (3, 4))
    with pytest.raises(ValueError):
        WeightedFamily((0, 1))
    with pytest.raises(ValueError):
        series(WeightedFamily((1,)), 0)


weights = st.lists(st.integers(1, 5), min_size=1, max_size=5).map(tuple)


@given(weights, st.integers(1, 7))
def test_degree_cancels_equal_weight(ws, w):
    a = series(WeightedFamily(ws + (w,), (w,)), 12)
    assert a == series(WeightedFamily(ws), 12)


@given(weights)
def test_monomial_count(ws):
    s = series(WeightedFamily(ws), 9)
    assert s == [monomial_count(ws, m) for m in range(9)]
