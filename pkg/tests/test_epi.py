import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rockafellian.catalog import constraint_perturbation_rock, penalty_family
from rockafellian.composite import SolverCfg
from rockafellian.epi import default_probes, epi_conv_probe, epi_dist, stability_check
from rockafellian.extreal import INF

GRID = np.linspace(-2, 8, 4001)


def test_distance_to_single_point_epigraph():
    R = constraint_perturbation_rock()
    assert epi_dist(R.slice([1.0]), (1, 5), GRID) == pytest.approx(math.sqrt(29), abs=1e-3)


def test_empty_epigraph_and_errors():
    R = constraint_perturbation_rock()
    assert epi_dist(R.slice([2.0]), (0, 0), GRID) == INF
    with pytest.raises(ValueError):
        epi_dist(R.slice([0.0]), (0, 0), [])


def test_point_inside_epigraph():
    assert epi_dist(lambda xs: xs[:, 0] ** 2, (1.0, 3.0), GRID) == 0.0


@settings(max_examples=60, deadline=None)
@given(st.tuples(st.floats(-3, 9), st.floats(-5, 20)), st.tuples(st.floats(-3, 9), st.floats(-5, 20)))
def test_one_lipschitz(z1, z2):
    phi = constraint_perturbation_rock().slice([0.0])
    d1, d2 = epi_dist(phi, z1, GRID), epi_dist(phi, z2, GRID)
    slack = GRID[1] - GRID[0]
    assert abs(d1 - d2) <= math.dist(z1, z2) + slack


@settings(max_examples=60, deadline=None)
@given(st.tuples(st.floats(-3, 9), st.floats(-5, 20)), st.floats(0, 5))
def test_smaller_function_is_closer(z, shift):
    phi = constraint_perturbation_rock().slice([0.0])
    psi = lambda xs: phi(xs) + shift
    assert epi_dist(phi, z, GRID) <= epi_dist(psi, z, GRID) + 1e-12


def test_probe_lattice_shape():
    P = default_probes(constraint_perturbation_rock().slice([0.0]), GRID)
    assert P.shape == (25, 2)


def test_penalty_family_converges_and_is_deterministic():
    us = -(2.0 ** -np.arange(1, 15))
    grid = np.linspace(-3, 3, 6001)
    a = epi_conv_probe(penalty_family(), us, grid=grid)
    b = epi_conv_probe(penalty_family(), us, grid=grid)
    assert a.verdict == "converged"
    assert a.verdicts == b.verdicts and np.array_equal(a.traces, b.traces)
    lines = a.to_csv().splitlines()
    assert lines[0] == "probe_id,nu,dist,target,verdict"
    assert len(lines) == 1 + len(a.probes) * len(us)


def test_jump_detected_as_divergence():
    R = constraint_perturbation_rock()
    us = 1 + 1 / np.arange(1, 12)
    rep = epi_conv_probe(R, us, probes=[(1, 5), (3, 10)], grid=GRID, u_bar=[1.0])
    assert rep.verdict == "diverged"
    assert "infinite" in rep.verdicts


def test_sequence_validation():
    R = constraint_perturbation_rock()
    with pytest.raises(ValueError):
        epi_conv_probe(R, [0.5, 0.9], grid=GRID, u_bar=[1.0])
    with pytest.raises(ValueError):
        epi_conv_probe(R, [0.9, 0.5, 0.95, 0.99], grid=GRID, u_bar=[1.0])


def test_stability_below_the_jump():
    R = constraint_perturbation_rock()
    cfg = SolverCfg([-10.0], [10.0], method="golden")
    st_ = stability_check(R, [1.0], 1 - 10.0 ** -np.arange(1, 9), cfg)
    assert st_.verdict == "stable"
    st_ = stability_check(R, [1.0], 1 + 1 / np.arange(1, 11), cfg)
    assert st_.verdict == "unstable" and np.all(np.isinf(st_.value_gaps))
