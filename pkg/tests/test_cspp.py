import itertools

import numpy as np
import pytest

from conftest import random_graph
from rockafellian.catalog import TOY_GRAPH, toy_graph
from rockafellian.cspp import (CsppLagrangian, WeightedGraph, bellman_ford, constrained_optimum,
                               cspp_dual_bound, cspp_relax, dijkstra, enumerate_paths,
                               format_graph, heuristic_path, parse_graph)
from rockafellian.extreal import INF


def test_toy_parse_and_enumerate():
    G = toy_graph()
    assert (G.num_vertices, G.num_edges, G.q) == (4, 4, 1)
    paths = sorted(enumerate_paths(G), key=lambda p: p.vertices)
    assert [(p.vertices, p.length, p.weights[0]) for p in paths] == [
        ((1, 2, 4), 2, 6), ((1, 3, 4), 4, 2)]
    assert constrained_optimum(paths)[0] == 4


def test_toy_dijkstra_and_ties():
    G = toy_graph()
    p = dijkstra(G, G.c)
    assert p.vertices == (1, 2, 4) and p.length == 2
    tied = dijkstra(G, G.c + 0.5 * G.D[0])
    assert tied.cost == 5 and tied.vertices == (1, 2, 4)


def test_toy_bounds():
    G = toy_graph()
    for y, bound, g in ((0.0, 2.0, 2.0), (0.5, 3.0, None), (2.0, 0.0, None)):
        b, _, sg = cspp_dual_bound(G, [y])
        assert b == pytest.approx(bound)
        if g is not None:
            assert sg[0] == g


def test_single_edge():
    G = WeightedGraph(2, ((1, 2),), [3.0], [[1.0]], 1, 2, [5.0])
    assert dijkstra(G, G.c).edges == (0,)


def test_parallel_edges_pick_cheapest():
    G = WeightedGraph(2, ((1, 2), (1, 2)), [3.0, 1.0], [[0.0, 9.0]], 1, 2, [5.0])
    assert dijkstra(G, G.c).edges == (1,)
    assert len(enumerate_paths(G)) == 2
    assert constrained_optimum(enumerate_paths(G))[1].edges == (0,)


def test_parse_errors():
    with pytest.raises(ValueError, match="self-loop"):
        parse_graph("p cspp 2 1 1\ns 1\nt 2\nb 1\na 1 1 1 1\n")
    with pytest.raises(ValueError, match="no path"):
        parse_graph("p cspp 3 1 1\ns 1\nt 3\nb 1\na 1 2 1 1\n")
    with pytest.raises(ValueError, match="line 5"):
        parse_graph("p cspp 2 1 1\ns 1\nt 2\nb 1\na 1 2 1 -1\n")
    with pytest.raises(ValueError, match="missing"):
        parse_graph("p cspp 2 1 1\na 1 2 1 1\n")
    with pytest.raises(ValueError):
        parse_graph("p cspp 2 2 1\ns 1\nt 2\nb 1\na 1 2 1 1\n")


def test_format_roundtrip(rng):
    for _ in range(10):
        G = random_graph(rng)
        H = parse_graph(format_graph(G))
        assert H.edges == G.edges and np.array_equal(H.c, G.c) and np.array_equal(H.D, G.D)
    assert format_graph(parse_graph(TOY_GRAPH)) == format_graph(toy_graph())


def test_enumeration_cutoff():
    n = 13
    edges = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    G = WeightedGraph(n, edges, np.ones(len(edges)), np.ones((1, len(edges))), 1, n, [1.0])
    with pytest.raises(ValueError, match="cutoff"):
        enumerate_paths(G)


def test_dual_bound_argument_checks():
    G = toy_graph()
    with pytest.raises(ValueError):
        cspp_dual_bound(G, [-1.0])
    with pytest.raises(ValueError):
        cspp_dual_bound(G, [1.0, 1.0])
    with pytest.raises(ValueError):
        dijkstra(G, -G.c)


def test_relax_toy():
    r = cspp_relax(toy_graph(), iters=200, t0=0.25)
    assert 3 - 1e-3 <= r.best_bound <= 3 + 1e-9
    assert r.best_path.vertices == (1, 3, 4) and r.gap == pytest.approx(1, abs=1e-3)
    assert r.state.monotone()


def test_relax_inactive_budget():
    G = parse_graph(TOY_GRAPH.replace("b 4", "b 1000"))
    r = cspp_relax(G, iters=50)
    assert r.gap == pytest.approx(0) and r.state.best_y[0] == 0


def test_relax_infeasible_budget():
    G = parse_graph(TOY_GRAPH.replace("b 4", "b 0"))
    r = cspp_relax(G, iters=50)
    assert r.no_feasible and r.gap == INF and r.best_path is None
    assert r.best_bound <= 2 + 1e-9 or r.best_bound > 2   # any finite bound is valid: opt is +inf


def test_random_instances(rng):
    for _ in range(100):
        G = random_graph(rng)
        opt, _ = constrained_optimum(enumerate_paths(G))
        for _ in range(10):
            y = rng.uniform(0, 5, G.q)
            b, p, g = cspp_dual_bound(G, y)
            assert b <= opt + 1e-9
            costs = G.c + G.D.T @ y
            assert p.cost == bellman_ford(G, costs)
        r = cspp_relax(G, iters=40)
        assert r.gap >= -1e-9


def test_lexicographic_tie_break(rng):
    for _ in range(100):
        G = random_graph(rng)
        p = dijkstra(G, G.c)
        paths = enumerate_paths(G)
        best = min(q.length for q in paths)
        assert p.length == best
        assert p.vertices == min(q.vertices for q in paths if q.length == best)


def test_concavity_and_supergradient(rng):
    for _ in range(20):
        G = random_graph(rng)
        L = CsppLagrangian(G)
        for _ in range(50):
            y1, y2 = rng.uniform(0, 5, (2, G.q))
            d1, d2 = L.dual(y1), L.dual(y2)
            assert L.dual((y1 + y2) / 2).psi >= (d1.psi + d2.psi) / 2 - 1e-9
            assert d2.psi <= d1.psi + d1.supergradient @ (y2 - y1) + 1e-9


def test_heuristic_is_feasible_or_none(rng):
    for _ in range(30):
        G = random_graph(rng)
        h = heuristic_path(G)
        assert h is None or h.feasible
