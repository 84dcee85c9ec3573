import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rockafellian.extreal import DomainError
from rockafellian.sets import (Box, FinitePointSet, NonposOrthant, PositiveRay, SingletonZero,
                               WholeSpace, contains, format_set, normal_cone, parse_set, project)

CONVEX = {
    "box": Box((0.0, -1.0), (1.0, 2.0)),
    "half": Box((-np.inf, 0.0), (0.0, np.inf)),
    "whole": WholeSpace(2),
    "nonpos": NonposOrthant(2),
    "zero": SingletonZero(2),
}


def test_contains_examples():
    assert contains(Box([0, 0], [1, 1]), [0.5, 1.0], 0)
    assert contains(NonposOrthant(1), [1e-7], 1e-6)
    assert not contains(FinitePointSet([(0, 1)]), [0, 0], 1e-6)
    with pytest.raises(ValueError):
        contains(Box([0], [1]), [0.5], -1)


def test_project_examples():
    assert project(Box([0], [1]), [2.0])[0] == 1
    assert np.array_equal(project(WholeSpace(2), [3.0, -4.0]), [3, -4])
    assert project(FinitePointSet([(0,), (3,)]), [2.0])[0] == 3
    # ties go to the lowest index
    assert project(FinitePointSet([(0,), (2,)]), [1.0])[0] == 0


def test_normal_cone_examples():
    assert normal_cone(NonposOrthant(1), [0.0]).tags() == ["nonneg"]
    assert normal_cone(WholeSpace(3), [1, 2, 3]).tags() == ["zero"] * 3
    assert normal_cone(Box([0], [1]), [0.5]).tags() == ["zero"]
    assert normal_cone(Box([0], [1]), [0.0]).tags() == ["nonpos"]
    assert normal_cone(SingletonZero(2), [0, 0]).tags() == ["all", "all"]
    assert normal_cone(FinitePointSet([(1, 2)]), [1, 2]).is_whole()
    with pytest.raises(DomainError):
        normal_cone(Box([0], [1]), [2.0])


def _member(X, rng):
    lo, hi = X.bounds()
    lo = np.where(np.isinf(lo), -5, lo)
    hi = np.where(np.isinf(hi), 5, hi)
    return lo + rng.random(lo.size) * (hi - lo)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(CONVEX)), st.integers(0, 2**32 - 1))
def test_projection_properties(name, seed):
    X = CONVEX[name]
    rng = np.random.default_rng(seed)
    x = rng.normal(size=2) * 4
    p = project(X, x)
    assert contains(X, p, 1e-12)
    assert np.array_equal(project(X, p), p)
    for _ in range(100):
        z = _member(X, rng)
        assert (x - p) @ (z - p) <= 1e-9
    # the residual is a normal vector at the projection
    assert normal_cone(X, p).contains(x - p, tol=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(CONVEX)), st.integers(0, 2**32 - 1))
def test_normal_inequality(name, seed):
    X = CONVEX[name]
    rng = np.random.default_rng(seed)
    x = project(X, rng.normal(size=2) * 4)
    N = normal_cone(X, x)
    lo = np.where(np.isinf(N.lo), -3, N.lo)
    hi = np.where(np.isinf(N.hi), 3, N.hi)
    v = lo + rng.random(2) * (hi - lo)
    assert N.contains(2.5 * v)   # cone
    for _ in range(100):
        assert v @ (_member(X, rng) - x) <= 1e-9


@pytest.mark.parametrize("X", list(CONVEX.values()) + [PositiveRay(1e-3),
                                                       FinitePointSet([(0.0, 1.0), (2.0, 3.5)])])
def test_text_roundtrip(X):
    Y = parse_set(format_set(X))
    assert format_set(Y) == format_set(X)


def test_invalid_sets():
    with pytest.raises(ValueError):
        Box([1], [0])
    with pytest.raises(ValueError):
        FinitePointSet([])
    with pytest.raises(ValueError):
        PositiveRay(0.0)
