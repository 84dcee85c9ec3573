import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rockafellian.catalog import (constraint_perturbation_rock, cubic_problem, gap_one_lagrangian,
                                  gap_one_numeric_psi, slater_failure_lagrangian,
                                  slater_failure_problem, slater_lagrangian, slater_problem)
from rockafellian.composite import Rockafellian, SolverCfg, inner_solve
from rockafellian.duality import (CompositeLagrangian, EqIneqLagrangian, dual_ascent, dual_eval,
                                  duality_gap, interior_domain_check, lagrangian_eval,
                                  strong_duality_probe, sup_scan)
from rockafellian.extreal import INF, NINF

CFG = SolverCfg([-10.0], [10.0], method="golden")


def test_lagrangian_examples():
    P = cubic_problem()
    L = EqIneqLagrangian(P.f0, P.F, q=1)
    assert lagrangian_eval(L, [1.0], [2.0]) == -1
    assert lagrangian_eval(L, [1.0], [-1.0]) == NINF


def test_dual_examples():
    P = cubic_problem()
    L = EqIneqLagrangian(P.f0, P.F, q=1, inner=CFG)
    assert dual_eval(L, [2.0]).psi == NINF
    assert dual_eval(slater_failure_lagrangian(), [1.0]).psi == -0.25
    assert dual_eval(gap_one_lagrangian(), [1.0]).psi == 0
    probe = gap_one_numeric_psi(1.0)
    assert all(v >= 0 for v in probe) and probe[-1] < probe[0]


def test_numeric_dual_matches_closed_form():
    P = slater_problem()
    L = EqIneqLagrangian(P.f0, P.F, q=1, inner=CFG)
    for y in (0.0, 0.5, 2.0, 3.0):
        assert L.dual([y]).psi == pytest.approx(y - y * y / 4, abs=1e-6)
    C = CompositeLagrangian(Rockafellian(P), inner=CFG)
    for y in (0.5, 2.0):
        assert C.dual([y]).psi == pytest.approx(y - y * y / 4, abs=1e-6)


def test_conjugate_identity_by_grid():
    # psi(y) = inf_{u,x} f(u,x) - y u on a window; grids are aligned so u = x - 1 is hit
    axis = np.round(np.linspace(-5, 5, 1001), 12)
    U, X = np.meshgrid(axis, axis)
    feas = 1 - X + U <= 1e-12
    for y in (0.0, 1.0, 2.0, 3.0):
        vals = np.where(feas, X ** 2 - y * U, INF)
        assert float(vals.min()) == pytest.approx(slater_lagrangian().dual([y]).psi, abs=1e-6)


@settings(max_examples=50, deadline=None)
@given(st.one_of(st.just(0.0), st.floats(1e-6, 20)), st.one_of(st.just(0.0), st.floats(1e-6, 20)))
def test_closed_form_duals_are_concave(a, b):
    for L in (slater_lagrangian(), slater_failure_lagrangian()):
        pa, pb, pm = (L.dual([v]).psi for v in (a, b, (a + b) / 2))
        if np.isfinite(pa) and np.isfinite(pb):
            assert pm >= (pa + pb) / 2 - 1e-9


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 20), st.floats(-3, 3))
def test_weak_duality_slater(y, x):
    # every feasible x of min x^2 s.t. x >= 1 bounds psi from above
    if x >= 1:
        assert slater_lagrangian().dual([y]).psi <= x * x + 1e-9


def test_ascent_cubic_halts():
    P = cubic_problem()
    st_ = dual_ascent(EqIneqLagrangian(P.f0, P.F, q=1, inner=CFG), [1.0], iters=10)
    assert st_.status == "minus-inf" and st_.iterations == 0 and "iteration 0" in st_.diagnosis


def test_ascent_slater_failure_flags_sup():
    st_ = dual_ascent(slater_failure_lagrangian(), [1.0], iters=40, rule="polyak", upper_bound=0.0)
    assert st_.best_bound == pytest.approx(0, abs=1e-6) and st_.best_bound < 0
    assert st_.sup_not_attained and st_.monotone()
    best, arg, attained = sup_scan(lambda y: slater_failure_lagrangian().dual(y).psi)
    assert not attained and best == pytest.approx(0, abs=1e-6)


def test_ascent_slater_converges():
    slow = dual_ascent(slater_lagrangian(), [0.0], iters=200, t0=1.0)
    assert 1 - 5e-3 <= slow.best_bound <= 1      # harmonic steps: slow but monotone
    st_ = dual_ascent(slater_lagrangian(), [0.0], iters=200, t0=2.0)
    assert st_.best_bound == pytest.approx(1, abs=1e-9)
    assert not st_.sup_not_attained and st_.monotone()
    lines = st_.to_csv().splitlines()
    assert st_.status == "stationary"        # exact step lands on the maximizer y = 2
    assert lines[0] == "iter,y_1,psi,best_bound" and len(lines) == st_.iterations + 1


def test_ascent_argument_errors():
    with pytest.raises(ValueError):
        dual_ascent(slater_lagrangian(), [0.0], rule="newton")
    with pytest.raises(ValueError):
        dual_ascent(slater_lagrangian(), [0.0], rule="polyak")
    with pytest.raises(ValueError):
        dual_ascent(slater_lagrangian(), [0.0], iters=0)


def test_gap_verdicts():
    assert duality_gap(1.0, 0.0).gap == 1 and duality_gap(1.0, 0.0).verdict == "weak"
    assert duality_gap(1.0, 1.0 - 1e-8).verdict == "strong"
    assert duality_gap(0.0, NINF).verdict == "infinite"
    assert duality_gap(INF, NINF).gap == INF


def test_interior_domain():
    cfg = SolverCfg([-2.0], [2.0], method="golden", feas_tol=0.0)
    assert interior_domain_check(Rockafellian(slater_problem()), CFG, 0.5)
    assert not interior_domain_check(Rockafellian(slater_failure_problem()), cfg, 1e-3)


def test_strong_duality_probe_fails_above_jump():
    R = constraint_perturbation_rock()
    us = 1 + 2.0 ** -np.arange(0, 12)
    r = strong_duality_probe(R, us, CFG, np.linspace(-2, 8, 2001))
    assert r.epi == "diverged" and r.verdict == "no evidence"
    assert r.condition_c == "undetermined"
