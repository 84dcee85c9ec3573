"""Shared fixtures and samplers for the property suites."""

import itertools

import numpy as np
import pytest

from rockafellian.catalog import NAVY_PIECES
from rockafellian.cspp import WeightedGraph
from rockafellian.monitoring import (GoalPenalty, IndicatorNonpos, IndicatorZero, MaxCoord,
                                     PwaMax, Separable, WeightedSum)

# --- monitoring functions ------------------------------------------------------

VARIANTS = {
    "zero": IndicatorZero(2),
    "nonpos": IndicatorNonpos(2),
    "goal": GoalPenalty((1.0, 2.0), (0.0, 0.5)),
    "wsum": WeightedSum((0.3, -1.2)),
    "pwa": PwaMax(((-2.0, 0.0), (1.0, 0.0))),
    "navy": PwaMax(NAVY_PIECES),
    "pwa2": PwaMax(((-1.0, 0.5), (0.0, 0.0), (3.0, -1.0), (0.5, 0.1)), dim=2),
    "max": MaxCoord(3),
    "sep": Separable((GoalPenalty((2.0,), (0.0,)), IndicatorNonpos(1), PwaMax(((-2.0, 0.0), (1.0, 0.0))))),
}


def _kinks(h):
    """Per-coordinate candidate points where h is not differentiable."""
    if isinstance(h, GoalPenalty):
        return [[t] for t in h.tau]
    if isinstance(h, PwaMax):
        a, b = h.alphas, h.betas
        ks = [(b[j] - b[i]) / (a[i] - a[j]) for i, j in itertools.combinations(range(len(a)), 2)]
        return [ks] * h.dim
    if isinstance(h, Separable):
        return sum((_kinks(p) for p in h.parts), [])
    return [[0.0]] * h.dim


def sample_dom(h, rng, kink_prob=0.3):
    """Random point of dom h; coordinates land on kinks with probability ``kink_prob``."""
    if isinstance(h, IndicatorZero):
        return np.zeros(h.dim)
    if isinstance(h, MaxCoord):
        z = rng.normal(size=h.dim) * 2
        if rng.random() < kink_prob:
            z[rng.choice(h.dim, 2, replace=False)] = z.max()
        return z
    z = rng.normal(size=h.dim) * 2
    ks = _kinks(h)
    for i in range(h.dim):
        if rng.random() < kink_prob:
            z[i] = rng.choice(ks[i])
    if isinstance(h, IndicatorNonpos):
        z = -np.abs(z)
    if isinstance(h, Separable):
        start = 0
        for p in h.parts:
            if isinstance(p, IndicatorNonpos):
                z[start:start + p.dim] = -np.abs(z[start:start + p.dim])
            start += p.dim
    return z


def sample_box(box, rng, spread=5.0):
    """Random element of a subdifferential box; infinite ends are truncated."""
    lo = np.where(np.isinf(box.lo), np.where(np.isinf(box.hi), -spread, box.hi - spread), box.lo)
    hi = np.where(np.isinf(box.hi), lo + spread, box.hi)
    if box.total is not None:
        w = rng.dirichlet(np.ones(box.dim)) * (hi > 0)
        w = w / w.sum() if w.sum() > 0 else (hi > 0) / max((hi > 0).sum(), 1)
        return w * box.total
    return lo + rng.random(box.dim) * (hi - lo)


def sample_dual(h, rng):
    return sample_box(h.conjugate_domain(), rng)


# --- graphs --------------------------------------------------------------------

def random_graph(rng, max_vertices=8, max_edges=14, max_q=2):
    """Random integer instance; a chain 1 -> 2 -> ... -> t keeps the sink reachable."""
    nv = int(rng.integers(3, max_vertices + 1))
    q = int(rng.integers(1, max_q + 1))
    edges = [(i, i + 1) for i in range(1, nv)]
    for _ in range(int(rng.integers(0, max_edges - len(edges) + 1))):
        i, j = rng.choice(np.arange(1, nv + 1), 2, replace=False)
        edges.append((int(i), int(j)))
    E = len(edges)
    c = rng.integers(1, 10, E).astype(float)
    D = rng.integers(0, 6, (q, E)).astype(float)
    d = rng.integers(2, 15, q).astype(float)
    return WeightedGraph(nv, tuple(edges), c, D, 1, nv, d)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# --- property harnesses (shared by unit and acceptance suites) -----------------

def fenchel_young_worst(h, rng, probes=1000):
    """Largest violation of h(z) + h*(y) >= <y,z> and of equality on subgradients."""
    ineq, eq = 0.0, 0.0
    for _ in range(probes):
        z = sample_dom(h, rng)
        y = sample_dual(h, rng)
        ineq = max(ineq, float(y @ z) - (h.eval(z) + h.conjugate(y)))
        v = sample_box(h.subdiff(z), rng)
        eq = max(eq, abs(h.eval(z) + h.conjugate(v) - float(v @ z)))
    return ineq, eq


def subgradient_worst(h, rng, probes=1000, inner=10):
    """Largest violation of h(x) >= h(z) + <v, x - z> over sampled v in the subdifferential."""
    worst = 0.0
    for _ in range(probes):
        z = sample_dom(h, rng)
        v = sample_box(h.subdiff(z), rng)
        hz = h.eval(z)
        for _ in range(inner):
            x = sample_dom(h, rng) if rng.random() < 0.7 else z + rng.normal(size=h.dim)
            hx = h.eval(x)
            if np.isfinite(hx):
                worst = max(worst, hz + float(v @ (x - z)) - hx)
    return worst


def brute_conjugate(h, y, window=3.0, points=None, zooms=3):
    """sup_z <y,z> - h(z) over a dense grid of [-window, window]^m.

    The objective is concave in z, so the grid is refined around the best
    point ``zooms`` times (each pass shrinks the window tenfold).
    """
    points = points or (6001 if h.dim == 1 else 201 if h.dim == 2 else 41)
    center = np.zeros(h.dim)
    best = -np.inf
    for _ in range(zooms + 1):
        axes = [np.linspace(c - window, c + window, points) for c in center]
        Z = np.array(list(itertools.product(*axes)))
        vals = Z @ y - h.eval_many(Z)
        k = int(np.argmax(vals))
        best = max(best, float(vals[k]))
        center, window = Z[k], window / 10
    return best


def sorting_superquantile(losses, probs, alpha):
    """Probability-weighted mean of the worst 1 - alpha tail."""
    order = np.argsort(losses)[::-1]
    mass, total = 1 - alpha, 0.0
    for k in order:
        take = min(probs[k], mass)
        total += take * losses[k]
        mass -= take
        if mass <= 0:
            break
    return total / (1 - alpha)
