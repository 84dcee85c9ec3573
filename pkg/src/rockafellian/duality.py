"""Lagrangians, dual functions, projected supergradient ascent and gaps.

A Lagrangian object exposes ``value(x, y)``, ``dual(y)`` (returning a
:class:`DualValue` with a minimizing ``x`` and a supergradient of psi at ``y``)
and ``project(y)`` onto the region where psi may be finite.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .composite import CompositeProblem, Rockafellian, SolverCfg, FunctionFamily, inner_solve
from .epi import epi_conv_probe
from .extreal import INF, NINF, ext_add, ext_neg, fmt
from .intervals import _project_capped_simplex
from .polymap import PolyMap
from .sets import FeasibleSet, WholeSpace

NEG_FLOOR = -1e12


@dataclass
class DualValue:
    psi: float
    x: Optional[np.ndarray] = None
    supergradient: Optional[np.ndarray] = None
    kind: str = "exact"  # exact | upper-estimate | minus-inf
    note: str = ""


def _escape_probe(values_on_boxes, floor: float) -> bool:
    """``psi = -inf`` judgment: the inner value keeps falling and crosses ``floor``."""
    v = np.asarray(values_on_boxes, dtype=float)
    if len(v) < 3 or not np.any(v <= floor):
        return False
    k = int(np.argmax(v <= floor))
    tail = v[max(0, k - 2): k + 1]
    return len(tail) >= 3 and bool(np.all(np.diff(tail) < 0))


class _NumericInner:
    """Minimize ``l(., y)`` on ``cfg``'s box, then probe expanding boxes for escape to -inf."""

    def __init__(self, cfg: SolverCfg, expansions: int = 10, factor: float = 10.0,
                 floor: float = NEG_FLOOR):
        self.cfg, self.expansions, self.factor, self.floor = cfg, expansions, factor, floor

    def solve(self, fn: Callable, n: int, y) -> tuple:
        fam = FunctionFamily(lambda _u, xs: fn(xs, y), n)
        base = inner_solve(fam, np.zeros(1), self.cfg)
        vals = []
        for k in range(1, self.expansions + 1):
            c = self.cfg.scaled(self.factor ** k)
            c.method = "grid"
            c.resolution = min(self.cfg.resolution, 2001 if n == 1 else 201)
            vals.append(inner_solve(fam, np.zeros(1), c).value)
        if _escape_probe([base.value] + vals, self.floor):
            return NINF, None, "minus-inf"
        return base.value, base.argmin, "upper-estimate"


@dataclass
class EqIneqLagrangian:
    """``l(x, y) = f0(x) + <F(x), y>`` with the last ``q`` multipliers sign-restricted.

    The first ``F.m - q`` outputs are equalities, the last ``q`` inequalities.
    """

    f0: PolyMap
    F: PolyMap
    q: int
    X: Optional[FeasibleSet] = None
    inner: Optional[SolverCfg] = None

    def __post_init__(self):
        if self.X is None:
            self.X = WholeSpace(self.F.n)

    @property
    def dim(self):
        return self.F.m

    @property
    def lower(self):
        return np.concatenate([np.full(self.F.m - self.q, -INF), np.zeros(self.q)])

    def project(self, y):
        return np.maximum(np.asarray(y, dtype=float), self.lower)

    def values(self, xs, y):
        y = np.atleast_1d(np.asarray(y, dtype=float))
        xs = np.atleast_2d(np.asarray(xs, dtype=float))
        if np.any(y < self.lower):
            return np.full(xs.shape[0], NINF)
        out = np.full(xs.shape[0], INF)
        ok = self.X.mask(xs) & self.F.domain_mask(xs) & self.f0.domain_mask(xs)
        if ok.any():
            out[ok] = self.f0.eval_many(xs[ok])[:, 0] + self.F.eval_many(xs[ok]) @ y
        return out

    def value(self, x, y) -> float:
        return float(self.values(np.atleast_1d(x)[None, :], y)[0])

    def dual(self, y) -> DualValue:
        y = np.atleast_1d(np.asarray(y, dtype=float))
        if np.any(y < self.lower):
            return DualValue(NINF, kind="minus-inf", note="multiplier outside sign region")
        if self.inner is None:
            raise ValueError("numeric dual needs an inner SolverCfg")
        psi, x, kind = _NumericInner(self.inner).solve(self.values, self.F.n, y)
        g = None if x is None else self.F(x)
        return DualValue(psi, x, g, kind)


@dataclass
class CompositeLagrangian:
    """``l(x, y) = iota_X(x) + f0(x) + <F(x) - anchor, y> - h*(y)``."""

    R: Rockafellian
    inner: Optional[SolverCfg] = None

    @property
    def dim(self):
        return self.R.m

    def project(self, y):
        D = self.R.problem.h.conjugate_domain()
        y = np.asarray(y, dtype=float)
        if D.total is not None:
            return _project_capped_simplex(y, D.lo, D.hi, D.total)
        return D.clamp(y)

    def values(self, xs, y):
        P = self.R.problem
        y = np.atleast_1d(np.asarray(y, dtype=float))
        xs = np.atleast_2d(np.asarray(xs, dtype=float))
        hs = P.h.conjugate(y)
        if hs == INF:
            return np.full(xs.shape[0], NINF)
        out = np.full(xs.shape[0], INF)
        ok = P.X.mask(xs) & P.F.domain_mask(xs) & P.f0.domain_mask(xs)
        if ok.any():
            out[ok] = (P.f0.eval_many(xs[ok])[:, 0]
                       + (P.F.eval_many(xs[ok]) - self.R.anchor) @ y - hs)
        return out

    def value(self, x, y) -> float:
        return float(self.values(np.atleast_1d(x)[None, :], y)[0])

    def dual(self, y) -> DualValue:
        P = self.R.problem
        y = np.atleast_1d(np.asarray(y, dtype=float))
        if P.h.conjugate(y) == INF:
            return DualValue(NINF, kind="minus-inf", note="y outside dom h*")
        if self.inner is None:
            raise ValueError("numeric dual needs an inner SolverCfg")
        psi, x, kind = _NumericInner(self.inner).solve(self.values, P.n, y)
        g = None if x is None else P.F(x) - self.R.anchor - P.h.conjugate_subgradient(y)
        return DualValue(psi, x, g, kind)


@dataclass
class ClosedFormLagrangian:
    """Hand-coded Lagrangian with an exact dual oracle ``dual_fn(y) -> (psi, x, g)``."""

    fn: Callable
    dual_fn: Callable
    lower: np.ndarray
    name: str = ""

    def __post_init__(self):
        self.lower = np.atleast_1d(np.asarray(self.lower, dtype=float))

    @property
    def dim(self):
        return self.lower.size

    def project(self, y):
        return np.maximum(np.asarray(y, dtype=float), self.lower)

    def value(self, x, y) -> float:
        return float(self.fn(np.atleast_1d(np.asarray(x, dtype=float)),
                             np.atleast_1d(np.asarray(y, dtype=float))))

    def dual(self, y) -> DualValue:
        y = np.atleast_1d(np.asarray(y, dtype=float))
        psi, x, g = self.dual_fn(y)
        kind = "minus-inf" if psi == NINF else "exact"
        return DualValue(float(psi), None if x is None else np.atleast_1d(x),
                         None if g is None else np.atleast_1d(np.asarray(g, dtype=float)), kind)


def lagrangian_eval(L, x, y) -> float:
    return L.value(x, y)


def dual_eval(L, y) -> DualValue:
    return L.dual(y)


# --- dual ascent --------------------------------------------------------------

@dataclass
class DualState:
    y: np.ndarray
    best_bound: float = NINF
    best_y: Optional[np.ndarray] = None
    bounds: list = field(default_factory=list)
    best_history: list = field(default_factory=list)
    ys: list = field(default_factory=list)
    supergradients: list = field(default_factory=list)
    xs: list = field(default_factory=list)
    rule: str = "diminishing"
    t0: float = 1.0
    iterations: int = 0
    status: str = "running"
    diagnosis: str = ""
    sup_not_attained: bool = False
    primal_values: list = field(default_factory=list)

    def weak_duality_ok(self, slack: float = 1e-9) -> bool:
        if not self.primal_values:
            return True
        return max(self.bounds, default=NINF) <= min(self.primal_values) + slack

    def monotone(self) -> bool:
        h = self.best_history
        return all(b >= a for a, b in zip(h[:-1], h[1:]))

    def to_csv(self) -> str:
        q = len(self.y)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iter"] + [f"y_{i + 1}" for i in range(q)] + ["psi", "best_bound"])
        for k, (y, b, bb) in enumerate(zip(self.ys, self.bounds, self.best_history)):
            w.writerow([k] + [fmt(v) for v in y] + [fmt(b), fmt(bb)])
        return buf.getvalue()


def dual_ascent(L, y0, iters: int = 200, t0: float = 1.0, rule: str = "diminishing",
                upper_bound: Optional[float] = None, on_iterate: Optional[Callable] = None,
                gtol: float = 0.0) -> DualState:
    """Projected supergradient ascent ``y <- proj(y + t_k g_k)``.

    Steps are ``t0 / (1 + k)`` or, with ``rule='polyak'``, ``(UB - psi_k) / |g_k|^2``.
    """
    if rule not in ("diminishing", "polyak"):
        raise ValueError(f"unknown step rule {rule!r}")
    if rule == "polyak" and upper_bound is None:
        raise ValueError("Polyak steps need an upper bound on sup psi")
    if iters < 1 or t0 <= 0:
        raise ValueError("need iters >= 1 and t0 > 0")
    y = L.project(np.atleast_1d(np.asarray(y0, dtype=float)))
    st = DualState(y.copy(), rule=rule, t0=t0)
    norms = []
    for k in range(iters):
        dv = L.dual(y)
        if not np.isfinite(dv.psi):
            st.status = "minus-inf" if dv.psi == NINF else "oracle-failure"
            st.diagnosis = (f"psi(y) = {fmt(dv.psi)} at iteration {k}: "
                            + (dv.note or "inner infimum escapes to -inf"))
            break
        if dv.supergradient is None:
            st.status, st.diagnosis = "oracle-failure", "inner oracle returned no minimizer"
            break
        g = dv.supergradient
        st.ys.append(y.copy())
        st.bounds.append(dv.psi)
        st.supergradients.append(g.copy())
        st.xs.append(dv.x)
        if dv.psi > st.best_bound:
            st.best_bound, st.best_y = dv.psi, y.copy()
        st.best_history.append(st.best_bound)
        norms.append(float(np.linalg.norm(y)))
        st.iterations = k + 1
        if on_iterate is not None:
            on_iterate(k, y, dv)
        gn = float(g @ g)
        if gn <= gtol:
            st.status, st.diagnosis = "stationary", "zero supergradient: y maximizes psi"
            break
        t = t0 / (1 + k) if rule == "diminishing" else max(upper_bound - dv.psi, 0.0) / gn
        y = L.project(y + t * g)
    else:
        st.status = "max-iter"
    st.y = y
    # heuristic: bound still rising while the iterates run away
    if st.status == "max-iter" and len(norms) >= 4:
        half = norms[len(norms) // 2]
        rising = st.best_history[-1] > st.best_history[-2]
        st.sup_not_attained = bool(rising and norms[-1] == max(norms)
                                   and norms[-1] >= 10 * max(half, 1.0))
        if st.sup_not_attained:
            st.diagnosis = "supremum not attained (iterates diverge while the bound keeps rising)"
    return st


# --- gaps and strong duality ----------------------------------------------------

@dataclass
class GapReport:
    primal: float
    dual: float
    gap: float
    verdict: str


def duality_gap(primal: float, dual: float, tol: float = 1e-6) -> GapReport:
    if primal == NINF and dual == NINF:
        gap = 0.0
    else:
        gap = ext_add(primal, ext_neg(dual))
    if np.isinf(gap):
        verdict = "infinite"
    elif abs(gap) <= tol:
        verdict = "strong"
    else:
        verdict = "weak"
    return GapReport(primal, dual, gap, verdict)


def sup_scan(psi: Callable, start: float = 1.0, factor: float = 10.0, windows: int = 8,
             points: int = 201):
    """Maximize a scalar concave ``psi`` on ``[0, start * factor**k]`` for growing ``k``.

    Returns ``(sup estimate, argmax estimate, attained)``; ``attained`` is False
    when every window puts its maximizer on its right edge.
    """
    best, arg, edge_hits = NINF, None, 0
    for k in range(windows):
        hi = start * factor ** k
        ys = np.linspace(0.0, hi, points)
        vals = np.array([psi(np.array([v])) for v in ys])
        j = int(np.argmax(vals))
        edge_hits += int(j == points - 1)
        if vals[j] > best:
            best, arg = float(vals[j]), float(ys[j])
    return best, arg, edge_hits < windows


def interior_domain_check(R, cfg: SolverCfg, radius: float) -> bool:
    """``p`` finite at the corners and the center of the ``radius`` cube around the anchor.

    For convex ``p`` this certifies that the anchor is interior to ``dom p``.
    """
    from itertools import product
    pts = [R.anchor] + [R.anchor + radius * np.array(s) for s in product((-1, 1), repeat=R.m)]
    return all(np.isfinite(inner_solve(R, u, cfg).value) for u in pts)


@dataclass
class StrongDualityReport:
    epi: str
    bounded_argmin: bool
    inner_product_liminf: Optional[float]
    condition_c: str
    per_nu_gaps: Optional[np.ndarray]
    condition_d: str
    values: np.ndarray
    verdict: str
    note: str = "numerical evidence, not a proof"


def strong_duality_probe(R, u_seq, cfg: SolverCfg, grid, perturbed_dual: Optional[Callable] = None,
                         tol: float = 1e-3) -> StrongDualityReport:
    """Evidence for ``inf f(anchor, .) = sup psi`` from a sequence ``u^nu -> anchor``.

    ``perturbed_dual(u)`` returns ``(sup psi^nu, y^nu)`` for the problem
    perturbed to ``u``; without it conditions (c) and (d) stay undetermined.
    """
    us = np.atleast_2d(np.asarray(u_seq, dtype=float))
    if us.shape[0] == 1 and R.m == 1:
        us = us.T
    epi = epi_conv_probe(R, us, grid=grid).verdict
    res = [inner_solve(R, u, cfg) for u in us]
    bounded = all(r.minimizers and not r.on_boundary for r in res)
    vals = np.array([r.value for r in res])
    c_val, c_stat, gaps, d_stat = None, "undetermined", None, "undetermined"
    if perturbed_dual is not None:
        duals = [perturbed_dual(u) for u in us]
        inner = np.array([float(np.atleast_1d(y) @ (u - R.anchor)) for (_, y), u in zip(duals, us)])
        c_val = float(np.min(inner[-3:]))
        c_stat = "pass" if c_val <= tol else "fail"
        gaps = np.array([abs(v - s) if np.isfinite(v) and np.isfinite(s) else INF
                         for v, (s, _) in zip(vals, duals)])
        d_stat = "pass" if np.all(gaps <= tol) else "fail"
    ok = epi == "converged" and bounded and c_stat == "pass" and d_stat == "pass"
    verdict = "strong duality evidence" if ok else "no evidence"
    return StrongDualityReport(epi, bounded, c_val, c_stat, gaps, d_stat, vals, verdict)
