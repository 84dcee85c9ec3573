"""Composite problems, their standard Rockafellian, and min-value sweeps.

A composite problem is ``minimize_{x in X} f0(x) + h(F(x))``.  The standard
Rockafellian perturbs the secondary quantities,
``f(u, x) = iota_X(x) + f0(x) + h(F(x) + u - anchor)``, so ``f(anchor, .)`` is
the actual objective.  Any object with ``n``, ``m``, ``anchor`` and a
vectorized ``evaluate(u, xs, feas_tol)`` is a *family* and can be handed to the
solvers here and in :mod:`rockafellian.epi`.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .extreal import INF, ext_add, fmt
from .monitoring import GoalPenalty, IndicatorNonpos, MonitoringFn
from .polymap import PolyMap
from .sets import FeasibleSet, FinitePointSet

GOLDEN = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class CompositeProblem:
    X: FeasibleSet
    f0: PolyMap
    F: PolyMap
    h: MonitoringFn

    def __post_init__(self):
        if self.f0.m != 1:
            raise ValueError("f0 must have exactly one output")
        if not (self.X.dim == self.f0.n == self.F.n):
            raise ValueError("X, f0 and F disagree on n")
        if self.F.m != self.h.dim:
            raise ValueError(f"F has {self.F.m} outputs but h acts on R^{self.h.dim}")

    @property
    def n(self):
        return self.X.dim

    @property
    def m(self):
        return self.F.m

    def objective(self, x) -> float:
        return rock_eval(Rockafellian(self), np.zeros(self.m), x)


@dataclass(frozen=True)
class Rockafellian:
    problem: CompositeProblem
    anchor: Optional[np.ndarray] = None

    def __post_init__(self):
        a = np.zeros(self.problem.m) if self.anchor is None else np.atleast_1d(
            np.asarray(self.anchor, dtype=float))
        if a.shape != (self.problem.m,):
            raise ValueError("anchor dimension must equal m")
        object.__setattr__(self, "anchor", a)

    @property
    def n(self):
        return self.problem.n

    @property
    def m(self):
        return self.problem.m

    def evaluate(self, u, xs, feas_tol: float = 0.0) -> np.ndarray:
        P = self.problem
        u = np.atleast_1d(np.asarray(u, dtype=float))
        xs = np.atleast_2d(np.asarray(xs, dtype=float))
        ind = P.X.indicator_many(xs, feas_tol)
        inside = P.F.domain_mask(xs) & P.f0.domain_mask(xs)
        out = np.full(xs.shape[0], INF)
        if inside.any():
            xi = xs[inside]
            z = P.F.eval_many(xi) + (u - self.anchor)
            out[inside] = ind[inside] + P.f0.eval_many(xi)[:, 0] + P.h.eval_many(z, feas_tol)
        return out

    def slice(self, u, feas_tol: float = 0.0) -> Callable:
        return lambda xs: self.evaluate(u, xs, feas_tol)


@dataclass
class FunctionFamily:
    """Family given directly by a vectorized ``fn(u, xs) -> values``."""

    fn: Callable
    n: int
    m: int = 1
    anchor: Optional[np.ndarray] = None
    name: str = ""

    def __post_init__(self):
        self.anchor = np.zeros(self.m) if self.anchor is None else np.atleast_1d(
            np.asarray(self.anchor, dtype=float))

    def evaluate(self, u, xs, feas_tol: float = 0.0) -> np.ndarray:
        xs = np.atleast_2d(np.asarray(xs, dtype=float))
        return np.asarray(self.fn(np.atleast_1d(np.asarray(u, dtype=float)), xs), dtype=float)

    def slice(self, u, feas_tol: float = 0.0) -> Callable:
        return lambda xs: self.evaluate(u, xs, feas_tol)


def rock_eval(R: Rockafellian, u, x) -> float:
    """Single-point evaluation with extended-real addition."""
    P = R.problem
    u = np.atleast_1d(np.asarray(u, dtype=float))
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if u.shape != (R.m,) or x.shape != (R.n,):
        raise ValueError("dimension mismatch")
    if not (P.F.in_domain(x) and P.f0.in_domain(x)):
        return INF
    ind = 0.0 if P.X.contains(x) else INF
    return ext_add(ext_add(ind, float(P.f0(x)[0])), P.h.eval(P.F(x) + u - R.anchor))


# --- inner solvers -----------------------------------------------------------

METHODS = ("grid", "golden", "projected-gradient")


@dataclass
class SolverCfg:
    lower: Sequence[float]
    upper: Sequence[float]
    method: str = "grid"
    resolution: int = 2001
    max_iter: int = 200
    eps: float = 1e-9
    feas_tol: float = 1e-10
    xtol: float = 1e-12

    def __post_init__(self):
        self.lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        self.upper = np.atleast_1d(np.asarray(self.upper, dtype=float))

    def validate(self, n: Optional[int] = None):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; choose from {METHODS}")
        if self.resolution < 2:
            raise ValueError("resolution must be at least 2")
        if self.eps < 0 or self.feas_tol < 0:
            raise ValueError("tolerances must be nonnegative")
        if self.lower.shape != self.upper.shape:
            raise ValueError("bounding box shape mismatch")
        if not (np.all(np.isfinite(self.lower)) and np.all(np.isfinite(self.upper))):
            raise ValueError("bounding box must be compact")
        if np.any(self.lower > self.upper):
            raise ValueError("bounding box with lower > upper")
        if n is not None and self.lower.size != n:
            raise ValueError(f"bounding box has dimension {self.lower.size}, problem has n={n}")
        if self.lower.size > 3 and self.method != "projected-gradient":
            raise ValueError("grid-based solvers are capped at n <= 3")
        if self.method == "golden" and self.lower.size != 1:
            raise ValueError("golden-section refinement needs n = 1")

    @property
    def step(self) -> np.ndarray:
        return (self.upper - self.lower) / (self.resolution - 1)

    def scaled(self, factor: float) -> "SolverCfg":
        mid = 0.5 * (self.lower + self.upper)
        half = 0.5 * (self.upper - self.lower) * factor
        return SolverCfg(mid - half, mid + half, self.method, self.resolution, self.max_iter,
                         self.eps, self.feas_tol, self.xtol)


@dataclass
class InnerResult:
    value: float
    minimizers: list
    near_minimizers: np.ndarray
    on_boundary: bool = False
    evaluations: int = 0

    @property
    def argmin(self) -> Optional[np.ndarray]:
        return self.minimizers[0] if self.minimizers else None


def _grid_axes(cfg: SolverCfg):
    return [np.linspace(a, b, cfg.resolution) for a, b in zip(cfg.lower, cfg.upper)]


def _grid_points(cfg: SolverCfg) -> np.ndarray:
    axes = _grid_axes(cfg)
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _clusters(idx: np.ndarray, shape) -> list:
    """Group flat grid indices whose multi-indices are within 2 steps (sup-norm)."""
    if idx.size == 1:
        return [idx]
    coords = np.stack(np.unravel_index(idx, shape), axis=1)
    pairs = cKDTree(coords).query_pairs(r=2.0, p=np.inf, output_type="ndarray")
    g = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])) if len(pairs) else
                   (np.zeros(0), (np.zeros(0, int), np.zeros(0, int))), shape=(idx.size, idx.size))
    _, labels = connected_components(g, directed=False)
    return [idx[labels == k] for k in range(labels.max() + 1)]


def _grid_solve(family, u, cfg: SolverCfg) -> InnerResult:
    pts = _grid_points(cfg)
    vals = np.empty(pts.shape[0])
    chunk = 200_000
    for s in range(0, pts.shape[0], chunk):
        vals[s:s + chunk] = family.evaluate(u, pts[s:s + chunk], cfg.feas_tol)
    vals = np.where(np.isnan(vals), INF, vals)
    finite = vals < INF
    if not finite.any():
        return InnerResult(INF, [], np.zeros((0, pts.shape[1])), evaluations=pts.shape[0])
    best = float(vals.min())
    near = np.flatnonzero(vals <= best + cfg.eps)
    shape = (cfg.resolution,) * pts.shape[1]
    reps = []
    for members in _clusters(near, shape):
        k = members[np.lexsort((members, vals[members]))[0]]
        reps.append((vals[k], k))
    reps.sort()
    minimizers = [pts[k].copy() for _, k in reps]
    h = cfg.step
    on_b = any(np.any((x - cfg.lower < 0.5 * h) | (cfg.upper - x < 0.5 * h)) for x in minimizers)
    return InnerResult(best, minimizers, pts[near], on_b, pts.shape[0])


def _golden(fun, a: float, b: float, x_best: float, f_best: float, xtol: float, max_iter: int):
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(max_iter):
        if b - a <= xtol:
            break
        for x, fx in ((c, fc), (d, fd)):
            if fx < f_best or (fx == f_best and x < x_best):
                x_best, f_best = x, fx
        if fc == INF and fd == INF:
            # both probes infeasible: keep the side holding the best feasible point
            if x_best < c:
                b, d, fd = d, c, fc
                c = b - GOLDEN * (b - a)
                fc = fun(c)
            else:
                a, c, fc = c, d, fd
                d = a + GOLDEN * (b - a)
                fd = fun(d)
        elif fc <= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = fun(d)
    for x, fx in ((c, fc), (d, fd)):
        if fx < f_best:
            x_best, f_best = x, fx
    return x_best, f_best


def _refine_golden(family, u, cfg: SolverCfg, res: InnerResult) -> InnerResult:
    h = float(cfg.step[0])
    lo, hi = float(cfg.lower[0]), float(cfg.upper[0])
    fun = lambda x: float(family.evaluate(u, np.array([[x]]), cfg.feas_tol)[0])
    refined = []
    for x0 in res.minimizers:
        x0 = float(x0[0])
        xb, fb = _golden(fun, max(lo, x0 - h), min(hi, x0 + h), x0, fun(x0), cfg.xtol, cfg.max_iter)
        refined.append((fb, xb))
    refined.sort()
    best = refined[0][0]
    keep = [np.array([x]) for f, x in refined if f <= best + cfg.eps]
    return InnerResult(best, keep, res.near_minimizers, res.on_boundary, res.evaluations)


def _fd_grad(fun, x, f0, step=1e-7):
    g = np.zeros_like(x)
    for j in range(x.size):
        e = np.zeros_like(x)
        e[j] = step
        fp, fm = fun(x + e), fun(x - e)
        if np.isfinite(fp) and np.isfinite(fm):
            g[j] = (fp - fm) / (2 * step)
        elif np.isfinite(fp):
            g[j] = (fp - f0) / step
        elif np.isfinite(fm):
            g[j] = (f0 - fm) / step
    return g


def _analytic_grad(R: Rockafellian, u, x, tol):
    P = R.problem
    z = P.F(x) + u - R.anchor
    s = P.h.subgradient(z, tol)
    return P.f0.jacobian(x)[0] + P.F.jacobian(x).T @ s


def _refine_pg(family, u, cfg: SolverCfg, res: InnerResult) -> InnerResult:
    fun = lambda x: float(family.evaluate(u, x[None, :], cfg.feas_tol)[0])
    X = family.problem.X if isinstance(family, Rockafellian) else None

    def proj(x):
        if isinstance(X, FinitePointSet):
            return X.project(x)
        x = np.clip(x, cfg.lower, cfg.upper)
        if X is not None:
            lo, hi = X.bounds()
            x = np.clip(x, np.maximum(lo, cfg.lower), np.minimum(hi, cfg.upper))
        return x

    refined = []
    for x in res.minimizers:
        x = proj(np.array(x, dtype=float))
        fx = fun(x)
        t = float(np.max(cfg.step))
        for _ in range(cfg.max_iter):
            if isinstance(family, Rockafellian):
                try:
                    g = _analytic_grad(family, u, x, 1e-9)
                except ValueError:
                    g = _fd_grad(fun, x, fx)
            else:
                g = _fd_grad(fun, x, fx)
            improved = False
            for _ in range(40):
                xn = proj(x - t * g)
                fn = fun(xn)
                if fn < fx:
                    x, fx, improved = xn, fn, True
                    t *= 2.0
                    break
                t *= 0.5
            if not improved or t < cfg.xtol:
                break
        refined.append((fx, tuple(x)))
    refined.sort()
    best = min(refined[0][0], res.value)
    keep = [np.array(x) for f, x in refined if f <= best + cfg.eps]
    if res.value < refined[0][0]:
        # the accelerator never beats the grid certificate downward
        keep = res.minimizers
    return InnerResult(best, keep, res.near_minimizers, res.on_boundary, res.evaluations)


def inner_solve(family, u, cfg: SolverCfg) -> InnerResult:
    """Minimize ``f(u, .)`` over the bounding box of ``cfg``.

    Returns ``(inf, [], [])`` when no probe is feasible.  ``near_minimizers``
    are the grid points within ``cfg.eps`` of the best grid value.
    """
    cfg.validate(family.n)
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if cfg.method == "projected-gradient" and family.n > 3:
        x0 = np.clip(np.zeros(family.n), cfg.lower, cfg.upper)
        v0 = float(family.evaluate(u, x0[None, :], cfg.feas_tol)[0])
        res = InnerResult(v0, [x0] if v0 < INF else [], x0[None, :])
        return _refine_pg(family, u, cfg, res) if res.minimizers else res
    res = _grid_solve(family, u, cfg)
    if not res.minimizers:
        return res
    if cfg.method == "golden":
        return _refine_golden(family, u, cfg, res)
    if cfg.method == "projected-gradient":
        return _refine_pg(family, u, cfg, res)
    return res


# --- sweeps --------------------------------------------------------------

@dataclass
class MinValueCurve:
    us: np.ndarray
    values: np.ndarray
    argmins: list
    results: list = field(repr=False, default_factory=list)

    def to_csv(self, fh=None, n: Optional[int] = None) -> str:
        k = self.us.shape[1]
        n = n if n is not None else max((len(a[0]) for a in self.argmins if a), default=0)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"u_{i + 1}" for i in range(k)] + ["p"] + [f"argmin_{j + 1}" for j in range(n)])
        for u, p, am in zip(self.us, self.values, self.argmins):
            cells = [fmt(v) for v in am[0]] if am else [""] * n
            w.writerow([fmt(v) for v in u] + [fmt(p)] + cells)
        text = buf.getvalue()
        if fh is not None:
            fh.write(text)
        return text


def read_curve_csv(text: str):
    rows = list(csv.reader(io.StringIO(text)))
    head = rows[0]
    k = sum(1 for c in head if c.startswith("u_"))
    us, ps, ams = [], [], []
    for r in rows[1:]:
        us.append([float(v) for v in r[:k]])
        ps.append(float(r[k]))
        ams.append([float(v) for v in r[k + 1:]] if r[k + 1:] and r[k + 1] != "" else [])
    return np.array(us), np.array(ps), ams


def pu_sweep(family, u_grid, cfg: SolverCfg) -> MinValueCurve:
    us = np.atleast_2d(np.asarray(u_grid, dtype=float))
    if us.shape[0] == 1 and family.m == 1 and us.shape[1] > 1:
        us = us.T
    if us.size == 0:
        raise ValueError("empty u grid")
    results = [inner_solve(family, u, cfg) for u in us]
    return MinValueCurve(us, np.array([r.value for r in results]),
                         [r.minimizers for r in results], results)


# --- penalty homotopy ---------------------------------------------------------

@dataclass
class HomotopyReport:
    thetas: np.ndarray
    us: np.ndarray
    products: np.ndarray
    minimizers: list
    values: np.ndarray
    constrained_argmin: Optional[np.ndarray]
    constrained_value: float
    distances: np.ndarray
    rate_condition_ok: bool

    @property
    def flagged(self) -> bool:
        return not self.rate_condition_ok


def penalty_homotopy(base: CompositeProblem, schedule, cfg: SolverCfg,
                     prod_tol: float = 1e-6) -> HomotopyReport:
    """Replace the hard constraint ``F(x) <= 0`` by ``theta * sum max(0, f_i(x) + u_i)``."""
    if not isinstance(base.h, IndicatorNonpos):
        raise ValueError("penalty homotopy needs h = indicator of the nonpositive orthant")
    schedule = list(schedule)
    thetas = np.array([float(t) for _, t in schedule])
    if len(thetas) < 2 or np.any(np.diff(thetas) < 0) or thetas[-1] <= thetas[0]:
        raise ValueError("penalty parameters must be nondecreasing and grow (theta -> inf)")
    us = np.array([np.broadcast_to(np.asarray(u, dtype=float), (base.m,)) for u, _ in schedule])
    products = thetas * np.maximum(0.0, us.max(axis=1))
    constrained = inner_solve(Rockafellian(base), np.zeros(base.m), cfg)
    mins, vals, dists = [], [], []
    for u, th in zip(us, thetas):
        pen = CompositeProblem(base.X, base.f0, base.F,
                               GoalPenalty((th,) * base.m, (0.0,) * base.m))
        r = inner_solve(Rockafellian(pen), u, cfg)
        mins.append(r.argmin)
        vals.append(r.value)
        if r.argmin is None or constrained.argmin is None:
            dists.append(INF)
        else:
            dists.append(min(np.linalg.norm(r.argmin - c) for c in constrained.minimizers))
    return HomotopyReport(thetas, us, products, mins, np.array(vals), constrained.argmin,
                          constrained.value, np.array(dists), bool(products[-1] <= prod_tol))


# --- superquantiles -----------------------------------------------------------

def _check_probs(probs, alpha):
    probs = np.asarray(probs, dtype=float)
    if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-12:
        raise ValueError("probabilities must be nonnegative and sum to 1")
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    return probs


def superquantile_objective(g_values, probs, alpha: float, gamma: float) -> float:
    probs = _check_probs(probs, alpha)
    g = np.asarray(g_values, dtype=float)
    return float(gamma + probs @ np.maximum(0.0, g - gamma) / (1 - alpha))


def superquantile_minimize(g_values, probs, alpha: float, x_candidates):
    """Joint minimization over finite candidates and the auxiliary scalar gamma.

    For fixed x the objective is convex piecewise-affine in gamma with kinks at
    the scenario losses, so scanning those losses is exact.
    """
    probs = _check_probs(probs, alpha)
    G = np.atleast_2d(np.asarray(g_values, dtype=float))
    cands = list(x_candidates)
    if not cands or len(cands) != G.shape[0]:
        raise ValueError("need one row of scenario losses per candidate")
    best = None
    for k, g in enumerate(G):
        gammas = np.unique(g)
        objs = gammas + (probs @ np.maximum(0.0, g[:, None] - gammas[None, :])) / (1 - alpha)
        j = int(np.argmin(objs))
        if best is None or objs[j] < best[2]:
            best = (cands[k], float(gammas[j]), float(objs[j]))
    return best
