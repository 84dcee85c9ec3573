import numpy as np
import pytest

from rockafellian.intervals import IntervalBox

INF = np.inf


def test_contains_and_sum_constraint():
    b = IntervalBox([0, 0], [1, 1], total=1.0)
    assert b.contains([0.5, 0.5])
    assert not b.contains([0.5, 0.6])
    assert not IntervalBox.nothing(2).contains([0, 0])


def test_min_norm_element():
    assert np.allclose(IntervalBox([1, -INF], [2, -3]).min_norm_element(), [1, -3])
    v = IntervalBox([0, 0, 0], [1, 1, 0], total=1.0).min_norm_element()
    assert np.allclose(v, [0.5, 0.5, 0])


def test_tags_and_shift():
    b = IntervalBox([0, -INF, -INF, 0], [0, 0, INF, INF])
    assert b.tags() == ["zero", "nonpos", "all", "nonneg"]
    s = IntervalBox([-2.0], [1.0]).shift([1.0])
    assert s.lo[0] == -1 and s.hi[0] == 2


def test_invalid():
    with pytest.raises(ValueError):
        IntervalBox([1.0], [0.0])
    with pytest.raises(ValueError):
        IntervalBox([0.0], [1.0]).contains([0.0, 1.0])
