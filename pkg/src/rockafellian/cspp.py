"""Constrained shortest paths via Lagrangian relaxation.

Relaxing the weight budgets ``D x <= d`` with multipliers ``y >= 0`` leaves a
plain shortest-path problem with edge lengths ``c + D^T y``; its value minus
``<d, y>`` is a lower bound on the constrained optimum.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .duality import DualState, DualValue, dual_ascent
from .extreal import INF, NINF

ENUM_CUTOFF = 12


@dataclass(frozen=True)
class WeightedGraph:
    num_vertices: int
    edges: tuple          # ((tail, head), ...), 1-based vertices
    c: np.ndarray         # (E,)
    D: np.ndarray         # (q, E)
    s: int
    t: int
    d: np.ndarray         # (q,)

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).reshape(-1)
        D = np.asarray(self.D, dtype=float).reshape(-1, c.size) if c.size else \
            np.zeros((np.asarray(self.d).size, 0))
        d = np.atleast_1d(np.asarray(self.d, dtype=float))
        edges = tuple((int(i), int(j)) for i, j in self.edges)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "edges", edges)
        if len(edges) != c.size or D.shape != (d.size, c.size):
            raise ValueError("edge data sizes disagree")
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (1 <= i <= self.num_vertices and 1 <= j <= self.num_vertices):
                raise ValueError(f"edge ({i},{j}) references an unknown vertex")
        if np.any(c < 0) or np.any(D < 0):
            raise ValueError("lengths and weights must be nonnegative")
        if np.any(d < 0):
            raise ValueError("budgets must be nonnegative")
        if self.s == self.t:
            raise ValueError("source and sink must differ")
        if not self._reachable():
            raise ValueError(f"no path from {self.s} to {self.t}")

    @property
    def q(self):
        return self.d.size

    @property
    def num_edges(self):
        return len(self.edges)

    def out_edges(self):
        adj = {v: [] for v in range(1, self.num_vertices + 1)}
        for k, (i, j) in enumerate(self.edges):
            adj[i].append(k)
        return adj

    def _reachable(self):
        adj, seen, stack = self.out_edges(), {self.s}, [self.s]
        while stack:
            v = stack.pop()
            for k in adj[v]:
                w = self.edges[k][1]
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return self.t in seen


def parse_graph(text: str) -> WeightedGraph:
    header, s, t, b, arcs = None, None, None, None, []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.split()[0] == "c":
            continue
        tok = line.split()
        try:
            if tok[0] == "p":
                if len(tok) != 5 or tok[1] != "cspp":
                    raise ValueError("expected 'p cspp <vertices> <edges> <q>'")
                header = tuple(int(v) for v in tok[2:])
            elif tok[0] in ("s", "t"):
                if len(tok) != 2:
                    raise ValueError(f"expected '{tok[0]} <vertex>'")
                if tok[0] == "s":
                    s = int(tok[1])
                else:
                    t = int(tok[1])
            elif tok[0] == "b":
                b = [float(v) for v in tok[1:]]
            elif tok[0] == "a":
                if header is None:
                    raise ValueError("edge before the 'p' line")
                if len(tok) != 4 + header[2]:
                    raise ValueError(f"edge needs tail, head, length and {header[2]} weights")
                i, j = int(tok[1]), int(tok[2])
                if i == j:
                    raise ValueError(f"self-loop at vertex {i}")
                vals = [float(v) for v in tok[3:]]
                if any(v < 0 for v in vals):
                    raise ValueError("negative length or weight")
                arcs.append((i, j, vals[0], vals[1:]))
            else:
                raise ValueError(f"unknown line type {tok[0]!r}")
        except ValueError as exc:
            raise ValueError(f"line {ln}: {exc}") from None
    if header is None or s is None or t is None or b is None:
        raise ValueError("missing one of the p/s/t/b lines")
    nv, ne, q = header
    if len(b) != q:
        raise ValueError(f"budget line has {len(b)} entries, expected {q}")
    if len(arcs) != ne:
        raise ValueError(f"expected {ne} edges, found {len(arcs)}")
    D = np.array([a[3] for a in arcs], dtype=float).T.reshape(q, ne)
    return WeightedGraph(nv, tuple((a[0], a[1]) for a in arcs), np.array([a[2] for a in arcs]),
                         D, s, t, np.array(b))


def format_graph(G: WeightedGraph) -> str:
    lines = [f"p cspp {G.num_vertices} {G.num_edges} {G.q}", f"s {G.s}", f"t {G.t}",
             "b " + " ".join(repr(float(v)) for v in G.d)]
    for k, (i, j) in enumerate(G.edges):
        lines.append(f"a {i} {j} {float(G.c[k])!r} " + " ".join(repr(float(v)) for v in G.D[:, k]))
    return "\n".join(lines) + "\n"


@dataclass
class PathSolution:
    edges: tuple
    vertices: tuple
    x: np.ndarray
    length: float
    weights: np.ndarray
    feasible: bool
    cost: float = np.nan   # value under the costs used to find it


def make_path(G: WeightedGraph, edge_ids, cost: float = np.nan) -> PathSolution:
    edge_ids = tuple(int(k) for k in edge_ids)
    verts = [G.s]
    for k in edge_ids:
        i, j = G.edges[k]
        if i != verts[-1]:
            raise ValueError("edges do not form a directed path")
        verts.append(j)
    if verts[-1] != G.t:
        raise ValueError("path does not end at the sink")
    x = np.zeros(G.num_edges)
    x[list(edge_ids)] = 1.0
    w = G.D @ x
    return PathSolution(edge_ids, tuple(verts), x, float(G.c @ x), w,
                        bool(np.all(w <= G.d + 1e-12)), cost)


def _cheapest_parallel(G: WeightedGraph, costs):
    best = {}
    for k, e in enumerate(G.edges):
        if e not in best or costs[k] < costs[best[e]]:
            best[e] = k
    return best


def dijkstra(G: WeightedGraph, costs) -> PathSolution:
    """Shortest s-t path; ties go to the lexicographically smallest vertex sequence."""
    costs = np.asarray(costs, dtype=float)
    if costs.shape != (G.num_edges,):
        raise ValueError("one cost per edge required")
    if np.any(costs < 0):
        raise ValueError("Dijkstra needs nonnegative costs")
    pick = _cheapest_parallel(G, costs)
    adj = {v: [] for v in range(1, G.num_vertices + 1)}
    for (i, j), k in pick.items():
        adj[i].append((j, k))
    heap = [(0.0, (G.s,), ())]
    done = set()
    while heap:
        dist, verts, eids = heapq.heappop(heap)
        v = verts[-1]
        if v in done:
            continue
        done.add(v)
        if v == G.t:
            return make_path(G, eids, dist)
        for w, k in adj[v]:
            if w not in done and w not in verts:
                heapq.heappush(heap, (dist + costs[k], verts + (w,), eids + (k,)))
    raise ValueError("sink unreachable")


def bellman_ford(G: WeightedGraph, costs) -> float:
    """Shortest-path cost oracle (independent of :func:`dijkstra`)."""
    costs = np.asarray(costs, dtype=float)
    dist = np.full(G.num_vertices + 1, INF)
    dist[G.s] = 0.0
    for _ in range(G.num_vertices - 1):
        changed = False
        for k, (i, j) in enumerate(G.edges):
            if dist[i] + costs[k] < dist[j]:
                dist[j] = dist[i] + costs[k]
                changed = True
        if not changed:
            break
    return float(dist[G.t])


def enumerate_paths(G: WeightedGraph, cutoff: int = ENUM_CUTOFF) -> list:
    """All simple s-t paths (parallel edges give distinct paths)."""
    if G.num_vertices > cutoff:
        raise ValueError(f"{G.num_vertices} vertices exceed the enumeration cutoff {cutoff}")
    adj = G.out_edges()
    out = []

    def walk(v, seen, eids):
        if v == G.t:
            out.append(make_path(G, eids))
            return
        for k in adj[v]:
            w = G.edges[k][1]
            if w not in seen:
                walk(w, seen | {w}, eids + [k])

    walk(G.s, {G.s}, [])
    return out


def constrained_optimum(paths) -> tuple:
    feas = [p for p in paths if p.feasible]
    if not feas:
        return INF, None
    best = min(feas, key=lambda p: (p.length, p.vertices))
    return best.length, best


def cspp_dual_bound(G: WeightedGraph, y) -> tuple:
    """``(psi(y), minimizing path, supergradient D x - d)``."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if y.shape != (G.q,):
        raise ValueError(f"expected {G.q} multipliers")
    if np.any(y < 0):
        raise ValueError("multipliers must be nonnegative")
    path = dijkstra(G, G.c + G.D.T @ y)
    bound = path.length + float((path.weights - G.d) @ y)
    return bound, path, path.weights - G.d


@dataclass
class CsppLagrangian:
    G: WeightedGraph

    @property
    def dim(self):
        return self.G.q

    def project(self, y):
        return np.maximum(np.asarray(y, dtype=float), 0.0)

    def value(self, x, y) -> float:
        y = np.atleast_1d(np.asarray(y, dtype=float))
        if np.any(y < 0):
            return NINF
        x = np.asarray(x, dtype=float)
        return float(self.G.c @ x + (self.G.D @ x - self.G.d) @ y)

    def dual(self, y) -> DualValue:
        bound, path, g = cspp_dual_bound(self.G, y)
        dv = DualValue(bound, path.x, g)
        dv.path = path
        return dv


def heuristic_path(G: WeightedGraph) -> Optional[PathSolution]:
    """Weight-feasible candidate: shortest path on budget-normalized weights.

    A budget of zero gets a large normalizer so any weight on it is avoided.
    """
    scale = np.where(G.d > 0, 1.0 / np.maximum(G.d, 1e-300), 1e6)
    p = dijkstra(G, scale @ G.D) if G.q else dijkstra(G, G.c)
    return p if p.feasible else None


@dataclass
class RelaxResult:
    best_bound: float
    best_path: Optional[PathSolution]
    best_length: float
    gap: float
    state: DualState
    no_feasible: bool = False
    candidates: list = field(default_factory=list)


def cspp_relax(G: WeightedGraph, iters: int = 200, t0: float = 0.25, y0=None,
               rule: str = "diminishing", upper_bound: Optional[float] = None) -> RelaxResult:
    L = CsppLagrangian(G)
    cands = []

    def collect(k, y, dv):
        if dv.path.feasible:
            cands.append(dv.path)

    y0 = np.zeros(G.q) if y0 is None else y0
    st = dual_ascent(L, y0, iters=iters, t0=t0, rule=rule, upper_bound=upper_bound,
                     on_iterate=collect)
    h = heuristic_path(G)
    if h is not None:
        cands.append(h)
    if cands:
        best = min(cands, key=lambda p: (p.length, p.vertices))
        st.primal_values = [p.length for p in cands]
        gap = best.length - st.best_bound
    else:
        best, gap = None, INF
    if not st.weak_duality_ok():
        raise AssertionError("weak duality violated: a bound exceeds a feasible length")
    return RelaxResult(st.best_bound, best, INF if best is None else best.length, gap, st,
                       best is None, cands)
