"""Epigraph distances and numerical epi-convergence evidence.

Nothing here proves epi-convergence.  Distances are computed on a finite grid,
and verdicts summarize the recorded numbers.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .composite import SolverCfg, inner_solve
from .extreal import INF, fmt

CONV_TOL = 1e-2


def _as_grid(grid) -> np.ndarray:
    g = np.asarray(grid, dtype=float)
    if g.ndim == 1:
        g = g[:, None]
    if g.size == 0:
        raise ValueError("empty grid")
    return g


def epi_dist(phi: Callable, z, grid) -> float:
    """Distance from ``z = (xbar, alphabar)`` to the epigraph of ``phi`` restricted to ``grid``.

    For a fixed abscissa ``x'`` the nearest epigraph point above it has ordinate
    ``max(phi(x'), alphabar)``, so only a minimum over the grid is needed.
    """
    g = _as_grid(grid)
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if z.size != g.shape[1] + 1:
        raise ValueError("probe must have dimension n + 1")
    xbar, abar = z[:-1], z[-1]
    vals = np.asarray(phi(g), dtype=float)
    ok = vals < INF
    if not ok.any():
        return INF
    dx2 = np.sum((g[ok] - xbar) ** 2, axis=1)
    da = np.maximum(vals[ok], abar) - abar
    return float(np.sqrt(np.min(dx2 + da ** 2)))


def default_probes(phi: Callable, grid, k: int = 5) -> np.ndarray:
    """``k x k`` lattice over (first coordinate, level) around the epigraph of ``phi``."""
    g = _as_grid(grid)
    vals = np.asarray(phi(g), dtype=float)
    fin = vals[np.isfinite(vals)]
    lo_a, hi_a = (fin.min(), fin.max()) if fin.size else (0.0, 1.0)
    span = max(hi_a - lo_a, 1.0)
    xs = np.linspace(g[:, 0].min(), g[:, 0].max(), k)
    alphas = np.linspace(lo_a - 0.25 * span, lo_a + span, k)
    mid = 0.5 * (g.min(axis=0) + g.max(axis=0))
    out = []
    for x in xs:
        for a in alphas:
            p = mid.copy()
            p[0] = x
            out.append(np.concatenate([p, [a]]))
    return np.array(out)


def _check_u_seq(u_seq, u_bar):
    us = np.atleast_2d(np.asarray(u_seq, dtype=float))
    if us.shape[0] == 1 and np.asarray(u_bar).size == 1 and us.shape[1] > 1:
        us = us.T
    dist = np.linalg.norm(us - np.atleast_1d(u_bar), axis=1)
    if len(dist) < 3 or np.any(np.diff(dist) > 1e-15) or dist[-1] >= dist[0]:
        raise ValueError("u sequence must approach u_bar (decreasing distances, >= 3 terms)")
    return us


@dataclass
class EpiProbeReport:
    probes: np.ndarray
    us: np.ndarray
    traces: np.ndarray
    targets: np.ndarray
    verdicts: list
    liminf_ok: bool
    limsup_ok: bool
    spot_checks: dict = field(default_factory=dict)
    note: str = "numerical evidence on a finite grid, not a proof"

    @property
    def verdict(self) -> str:
        if all(v == "converged" for v in self.verdicts) and self.liminf_ok and self.limsup_ok:
            return "converged"
        return "diverged"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["probe_id", "nu", "dist", "target", "verdict"])
        for i, row in enumerate(self.traces):
            for nu, d in enumerate(row, start=1):
                w.writerow([i, nu, fmt(d), fmt(self.targets[i]), self.verdicts[i]])
        return buf.getvalue()


def _verdict(trace: np.ndarray, target: float, tol: float) -> str:
    tail = trace[-3:]
    if np.isinf(target):
        return "converged" if np.all(np.isinf(tail)) else "diverged"
    if np.any(np.isinf(tail)):
        return "infinite"
    return "converged" if np.all(np.abs(tail - target) < tol) else "diverged"


def _lsc_value(phi, grid, x, radius):
    d = np.max(np.abs(grid - x), axis=1)
    near = grid[d <= radius]
    if near.size == 0:
        return float(phi(x[None, :])[0])
    return float(np.min(phi(near)))


def epi_conv_probe(family, u_seq, probes=None, grid=None, u_bar=None, tol: float = CONV_TOL,
                   feas_tol: float = 1e-10, n_samples: int = 11) -> EpiProbeReport:
    u_bar = np.atleast_1d(family.anchor if u_bar is None else np.asarray(u_bar, dtype=float))
    us = _check_u_seq(u_seq, u_bar)
    g = _as_grid(grid)
    phi = family.slice(u_bar, feas_tol)
    probes = default_probes(phi, g) if probes is None else np.atleast_2d(np.asarray(probes, float))
    targets = np.array([epi_dist(phi, z, g) for z in probes])
    slices = [family.slice(u, feas_tol) for u in us]
    traces = np.array([[epi_dist(s, z, g) for s in slices] for z in probes])
    verdicts = [_verdict(tr, t, tol) for tr, t in zip(traces, targets)]

    # liminf along grid minimizers of the approximating functions
    spacing = float(np.max(np.ptp(g, axis=0)) / max(len(g) - 1, 1)) if g.shape[1] == 1 else \
        float(np.max(np.ptp(g, axis=0)) / max(round(len(g) ** (1 / g.shape[1])) - 1, 1))
    xs, fx = [], []
    for s in slices:
        v = np.asarray(s(g), dtype=float)
        k = int(np.argmin(v))
        xs.append(g[k])
        fx.append(v[k])
    fx = np.array(fx)
    if np.all(np.isinf(fx[-3:])):
        liminf_ok, liminf = True, INF
    else:
        move = float(np.max(np.abs(xs[-1] - xs[-2])))
        radius = max(2 * spacing, 2 * move)
        liminf = float(np.min(fx[-3:]))
        liminf_ok = liminf >= _lsc_value(phi, g, xs[-1], radius) - tol

    # limsup along constant sequences
    idx = np.linspace(0, len(g) - 1, n_samples).round().astype(int)
    sample = g[idx]
    base = np.asarray(phi(sample), dtype=float)
    tail = np.array([np.asarray(s(sample), dtype=float) for s in slices[-3:]])
    limsup = tail.max(axis=0)
    limsup_ok = bool(np.all((limsup <= base + tol) | np.isinf(base)))
    checks = {"liminf_estimate": liminf, "limsup_samples": sample, "limsup_values": limsup,
              "anchor_values": base}
    return EpiProbeReport(probes, us, traces, targets, verdicts, bool(liminf_ok), limsup_ok, checks)


@dataclass
class StabilityReport:
    us: np.ndarray
    p_bar: float
    values: np.ndarray
    value_gaps: np.ndarray
    argmin_dists: np.ndarray
    max_jump: float
    boundary_hits: int
    verdict: str


def _gap(a: float, b: float) -> float:
    if np.isinf(a) or np.isinf(b):
        return 0.0 if a == b else INF
    return abs(a - b)


def stability_check(family, u_bar, u_seq, cfg: SolverCfg, tol: float = CONV_TOL) -> StabilityReport:
    """Track ``p(u^nu) -> p(u_bar)`` and ``dist(x^nu, P(u_bar)) -> 0``."""
    u_bar = np.atleast_1d(np.asarray(u_bar, dtype=float))
    us = _check_u_seq(u_seq, u_bar)
    base = inner_solve(family, u_bar, cfg)
    vals, gaps, dists, hits = [], [], [], 0
    for u in us:
        r = inner_solve(family, u, cfg)
        vals.append(r.value)
        gaps.append(_gap(r.value, base.value))
        hits += int(r.on_boundary)
        if r.argmin is None or not base.minimizers:
            dists.append(INF)
        else:
            # distance to the whole (near-)argmin set, not just its representatives
            target = np.vstack([np.atleast_2d(base.minimizers), base.near_minimizers])
            dists.append(float(np.min(np.linalg.norm(target - r.argmin, axis=1))))
    vals = np.array(vals)
    jumps = [_gap(a, b) for a, b in zip(vals[:-1], vals[1:])]
    tail = slice(-3, None)
    stable = (np.isfinite(base.value) and np.all(np.array(gaps)[tail] <= tol)
              and np.all(np.array(dists)[tail] <= tol))
    return StabilityReport(us, base.value, vals, np.array(gaps), np.array(dists),
                           float(max(jumps, default=0.0)), hits,
                           "stable" if stable else "unstable")
