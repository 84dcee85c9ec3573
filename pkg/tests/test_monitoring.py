import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import (VARIANTS, brute_conjugate, fenchel_young_worst, sample_dom, sample_dual,
                      subgradient_worst)
from rockafellian.extreal import INF, DomainError
from rockafellian.monitoring import (GoalPenalty, IndicatorNonpos, IndicatorZero, MaxCoord, PwaMax,
                                     Separable, WeightedSum, format_monitoring, h_conjugate,
                                     h_domain_normal, h_eval, h_subdiff, parse_monitoring)


def test_eval_examples():
    assert h_eval(GoalPenalty((1, 2), (0, 0)), [-1, 3]) == 6
    assert h_eval(IndicatorNonpos(2), [0, -1]) == 0
    assert h_eval(IndicatorNonpos(2), [0.1, -1]) == INF
    assert h_eval(WeightedSum((0.25, 0.75)), [4, 4]) == 4
    assert h_eval(MaxCoord(3), [1, 5, -2]) == 5


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        h_eval(IndicatorNonpos(2), [0.0])


def test_subdiff_examples():
    h = PwaMax(((-2, 0), (1, 0)))
    S = h_subdiff(h, [0.0])
    assert (S.lo[0], S.hi[0]) == (-2, 1)
    S = h_subdiff(h, [1.0])
    assert (S.lo[0], S.hi[0]) == (1, 1)
    S = h_subdiff(GoalPenalty((2,), (0,)), [0.0])
    assert (S.lo[0], S.hi[0]) == (0, 2)
    S = h_subdiff(IndicatorNonpos(1), [0.0])
    assert (S.lo[0], S.hi[0]) == (0, INF)
    assert h_subdiff(IndicatorZero(2), [0, 0]).is_whole()
    with pytest.raises(DomainError):
        h_subdiff(IndicatorNonpos(1), [1.0])


def test_goal_subdiff_by_grid():
    # every v in [0,2] satisfies the subgradient inequality at 0, nothing outside does
    h = GoalPenalty((2,), (0,))
    xs = np.linspace(-5, 5, 1001)
    hx = h.eval_many(xs[:, None])
    ok = [v for v in np.linspace(-1, 3, 401) if np.all(hx >= v * xs - 1e-12)]
    assert min(ok) == pytest.approx(0) and max(ok) == pytest.approx(2)


def test_conjugate_examples():
    assert h_conjugate(IndicatorNonpos(2), [1, 0]) == 0
    assert h_conjugate(IndicatorNonpos(2), [-1, 0]) == INF
    g = GoalPenalty((2,), (0,))
    assert h_conjugate(g, [1.0]) == 0
    assert h_conjugate(g, [3.0]) == INF
    axis = np.arange(-100_000, 100_001) * 1e-3
    assert np.max(axis * 1.0 - g.eval_many(axis[:, None])) == pytest.approx(0, abs=1e-9)
    assert np.max(axis * 3.0 - g.eval_many(axis[:, None])) > 90


def test_domain_normal():
    assert h_domain_normal(IndicatorZero(2), [0, 0]).is_whole()
    assert h_domain_normal(GoalPenalty((1,), (0,)), [3.0]).is_zero()
    S = h_domain_normal(IndicatorNonpos(1), [0.0])
    assert (S.lo[0], S.hi[0]) == (0, INF)
    assert h_domain_normal(IndicatorNonpos(1), [-1.0]).is_zero()


def test_pwa_validation():
    with pytest.raises(ValueError):
        PwaMax(())
    with pytest.raises(ValueError):
        PwaMax(((1, 0), (1, 2)))
    with pytest.raises(ValueError):
        GoalPenalty((-1,), (0,))
    assert PwaMax(((1, 0), (-1, 0))).pieces[0][0] == -1


def test_dominated_piece_conjugate():
    # the middle piece never attains the max; the conjugate interpolates past it
    h = PwaMax(((-1, 0), (0, -5), (1, 0)))
    assert h.conjugate([0.0]) == pytest.approx(0.0)
    assert h.conjugate([0.0]) == pytest.approx(brute_conjugate(h, np.array([0.0])), abs=2e-3)


@pytest.mark.parametrize("name", sorted(VARIANTS))
def test_fenchel_young_and_subgradients(name, rng):
    h = VARIANTS[name]
    ineq, eq = fenchel_young_worst(h, rng, probes=200)
    assert ineq <= 1e-9 and eq <= 1e-9
    assert subgradient_worst(h, rng, probes=200) <= 1e-9


@pytest.mark.parametrize("name", sorted(VARIANTS))
def test_conjugate_matches_grid(name, rng):
    h = VARIANTS[name]
    for _ in range(5):
        y = sample_dual(h, rng)
        assert abs(brute_conjugate(h, y) - h.conjugate(y)) <= 2e-3


@pytest.mark.parametrize("name", ["nonpos", "goal", "pwa", "navy", "wsum"])
def test_conjugate_outside_domain_grows(name, rng):
    h = VARIANTS[name]
    box = h.conjugate_domain()
    y = np.where(np.isfinite(box.hi), box.hi + 0.5, box.lo - 0.5)
    assert h.conjugate(y) == INF
    assert brute_conjugate(h, y, window=50.0) > brute_conjugate(h, y, window=5.0) + 1


@pytest.mark.parametrize("name", ["goal", "pwa", "navy", "sep"])
def test_fenchel_equality_only_on_subgradients(name, rng):
    h = VARIANTS[name]
    for _ in range(30):
        z = sample_dom(h, rng, kink_prob=0.5)
        S = h.subdiff(z)
        box = h.conjugate_domain()
        for _ in range(20):
            y = rng.uniform(np.where(np.isinf(box.lo), -5, box.lo), np.where(np.isinf(box.hi), 5, box.hi))
            gap = h.eval(z) + h.conjugate(y) - float(y @ z)
            assert gap >= -1e-9
            if gap <= 1e-9:
                assert S.contains(y, tol=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sorted(VARIANTS)), st.integers(0, 2**32 - 1))
def test_midpoint_convexity(name, seed):
    h = VARIANTS[name]
    rng = np.random.default_rng(seed)
    z1, z2 = sample_dom(h, rng), sample_dom(h, rng)
    assert h.eval((z1 + z2) / 2) <= (h.eval(z1) + h.eval(z2)) / 2 + 1e-12


@pytest.mark.parametrize("name", sorted(VARIANTS))
def test_text_roundtrip(name):
    h = VARIANTS[name]
    assert parse_monitoring(format_monitoring(h)) == h


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_monitoring("")
    with pytest.raises(ValueError):
        parse_monitoring("goal 1 2 3")
    with pytest.raises(ValueError):
        parse_monitoring("banana 2")
    with pytest.raises(ValueError):
        Separable((MaxCoord(2),))
