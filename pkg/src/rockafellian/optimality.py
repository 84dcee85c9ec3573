"""Optimality conditions for composite problems and min-value sensitivity.

Multiplier sets are searched by bounded least squares: the unknowns are the
multiplier ``y`` (box = subdifferential of ``h``) and a normal vector ``w``
(box = normal cone of ``X``), and we minimize ``|-grad f0 - J^T y - w|``.
Every set involved is a coordinate box, so this search is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import lsq_linear

from .composite import CompositeProblem, Rockafellian, SolverCfg, inner_solve
from .extreal import INF, DomainError, fmt
from .intervals import IntervalBox
from .monitoring import ACTIVE_TOL, IndicatorZero

STATUSES = ("multiplier-found", "no-multiplier", "qualification-failed", "infeasible-point")
SUM_WEIGHT = 1e8


@dataclass
class MultiplierFinding:
    status: str
    y: Optional[np.ndarray] = None
    residual: float = INF
    w: Optional[np.ndarray] = None
    active: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.status == "multiplier-found"

    def report(self) -> str:
        """Flat ``key=value`` lines."""
        lines = [f"status={self.status}", f"residual={fmt(self.residual)}"]
        if self.y is not None:
            lines.append("y=" + ",".join(fmt(v) for v in self.y))
        if self.w is not None:
            lines.append("normal=" + ",".join(fmt(v) for v in self.w))
        for k, v in self.active.items():
            lines.append(f"{k}=" + ",".join(v))
        return "\n".join(lines)


def _bounded_lsq(A, b, lo, hi, total_rows=None):
    """min |A v - b| over lo <= v <= hi; fixed coordinates are eliminated first.

    ``total_rows`` is an optional ``(a, t)`` pair enforcing ``a @ v == t`` by a
    heavily weighted extra row.
    """
    if total_rows is not None:
        a, t = total_rows
        A = np.vstack([A, SUM_WEIGHT * a[None, :]])
        b = np.concatenate([b, [SUM_WEIGHT * t]])
    v = np.where(lo == hi, lo, 0.0)
    free = lo < hi
    if not free.any():
        return v
    rhs = b - A[:, ~free] @ v[~free]
    if not np.any(A[:, free]):
        v[free] = np.clip(0.0, lo[free], hi[free])
        return v
    res = lsq_linear(A[:, free], rhs, bounds=(lo[free], hi[free]), method="bvls",
                     tol=1e-14, lsmr_tol=None)
    v[free] = np.clip(res.x, lo[free], hi[free])
    return v


def _setup(P: CompositeProblem, u, x):
    u = np.atleast_1d(np.asarray(u, dtype=float))
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if u.shape != (P.m,) or x.shape != (P.n,):
        raise ValueError(f"dimension mismatch: u{u.shape}, x{x.shape} vs m={P.m}, n={P.n}")
    return u, x


def _feasible(P: CompositeProblem, u, x, feas_tol) -> bool:
    if not (P.F.in_domain(x) and P.f0.in_domain(x)):
        return False
    if not P.X.contains(x, feas_tol):
        return False
    return np.isfinite(P.h.eval(P.F(x) + u, feas_tol))


def composite_kkt(P: CompositeProblem, u, x, tol: float = 1e-6, active_tol: float = ACTIVE_TOL,
                  feas_tol: float = 1e-9) -> MultiplierFinding:
    """Search ``Y(u, x) = {y in dh(F(x)+u) : -grad f0(x) - J(x)^T y in N_X(x)}``."""
    u, x = _setup(P, u, x)
    if not _feasible(P, u, x, feas_tol):
        return MultiplierFinding("infeasible-point")
    z = P.F(x) + u
    S = P.h.subdiff(z, max(active_tol, feas_tol))
    N = P.X.normal_cone(x, max(active_tol, feas_tol))
    g = P.f0.jacobian(x)[0]
    J = P.F.jacobian(x)
    m, n = P.m, P.n
    # unknowns v = (y, w):  J^T y + w = -g
    A = np.hstack([J.T, np.eye(n)])
    lo = np.concatenate([S.lo, N.lo])
    hi = np.concatenate([S.hi, N.hi])
    tot = None
    if S.total is not None:
        tot = (np.concatenate([np.ones(m), np.zeros(n)]), S.total)
    v = _bounded_lsq(A, -g, lo, hi, tot)
    y, w = v[:m], v[m:]
    if S.total is not None:
        y = S.min_norm_element() if not np.any(S.hi > S.lo) else _polish_sum(y, S)
        w = N.clamp(-g - J.T @ y)
    residual = float(np.linalg.norm(-g - J.T @ y - w))
    active = {"h_subdiff": S.tags(), "normal_cone": N.tags()}
    status = "multiplier-found" if residual <= tol and S.contains(y, 1e-12) else "no-multiplier"
    return MultiplierFinding(status, y, residual, w, active)


def _polish_sum(y, S: IntervalBox):
    from .intervals import _project_capped_simplex
    return _project_capped_simplex(y, S.lo, S.hi, S.total)


def qualification_check(P: CompositeProblem, u, x, tol: float = 1e-9,
                        active_tol: float = ACTIVE_TOL, feas_tol: float = 1e-9):
    """Return ``(ok, witness)``; ``ok`` is False when a nonzero ``y`` in
    ``N_{dom h}(F(x)+u)`` has ``-J^T y in N_X(x)``.

    The cone is a coordinate box-cone, so it suffices to fix one coordinate to
    ``+1`` or ``-1`` at a time and solve for the rest.
    """
    u, x = _setup(P, u, x)
    if not _feasible(P, u, x, feas_tol):
        raise DomainError(f"{x} is infeasible")
    if P.h.real_valued:
        return True, None
    z = P.F(x) + u
    K = P.h.domain_normal(z, max(active_tol, feas_tol))
    N = P.X.normal_cone(x, max(active_tol, feas_tol))
    J = P.F.jacobian(x)
    m, n = P.m, P.n
    A = np.hstack([J.T, np.eye(n)])
    lo0 = np.concatenate([K.lo, N.lo])
    hi0 = np.concatenate([K.hi, N.hi])
    for i in range(m):
        for s in (1.0, -1.0):
            if (s > 0 and K.hi[i] <= 0) or (s < 0 and K.lo[i] >= 0):
                continue
            lo, hi = lo0.copy(), hi0.copy()
            lo[i] = hi[i] = s
            v = _bounded_lsq(A, np.zeros(n), lo, hi)
            if np.linalg.norm(A @ v) <= tol:
                y = v[:m]
                return False, y / np.linalg.norm(y)
    return True, None


def sum_rule(grad, box: IntervalBox) -> IntervalBox:
    """Subgradients of ``smooth + nonsmooth``: the gradient shifts the box."""
    return box.shift(grad)


def fermat_check(subdiff_box: IntervalBox, tol: float = 1e-9) -> bool:
    return subdiff_box.contains(np.zeros(subdiff_box.dim), tol)


def lagrange_equality(P: CompositeProblem, x, tol: float = 1e-8,
                      rank_tol: float = 1e-10) -> MultiplierFinding:
    """Solve ``grad f0(x) + J(x)^T y = 0`` by least squares (equality constraints)."""
    if not isinstance(P.h, IndicatorZero):
        raise ValueError("lagrange_equality needs h = indicator of {0}")
    _, x = _setup(P, np.zeros(P.m), x)
    if not (P.F.in_domain(x) and P.X.contains(x, tol)) or np.max(np.abs(P.F(x))) > tol:
        raise DomainError(f"{x} violates the equality constraints")
    N = P.X.normal_cone(x)
    if not N.is_zero():
        return composite_kkt(P, np.zeros(P.m), x, tol)
    g = P.f0.jacobian(x)[0]
    J = P.F.jacobian(x)
    y, *_ = np.linalg.lstsq(J.T, -g, rcond=None)
    residual = float(np.linalg.norm(g + J.T @ y))
    rank = np.linalg.matrix_rank(J, tol=rank_tol) if J.size else 0
    active = {"rank": [str(rank)]}
    if rank < P.m:
        return MultiplierFinding("qualification-failed", y, residual, None, active)
    status = "multiplier-found" if residual <= tol else "no-multiplier"
    return MultiplierFinding(status, y, residual, None, active)


@dataclass
class SubgradReport:
    p_bar: float
    minimizers: list
    findings: list
    multipliers: list
    fd: Optional[np.ndarray]
    fd_status: str
    one_sided: Optional[np.ndarray] = None
    agree: Optional[bool] = None
    minorant_ok: Optional[bool] = None
    minorant_violation: float = 0.0


def _p(R, u, cfg):
    return inner_solve(R, u, cfg).value


def min_value_subgrad(R: Rockafellian, u_bar, cfg: SolverCfg, step: float = 1e-4,
                      tol: float = 1e-6, active_tol: float = 1e-6, agree_tol: float = 5e-2,
                      minorant_grid=None) -> SubgradReport:
    """Multiplier and finite-difference estimates of subgradients of ``p`` at ``u_bar``.

    Disagreement is reported, not adjudicated: for nonconvex problems the
    multiplier set only contains the subgradients.
    """
    u_bar = np.atleast_1d(np.asarray(u_bar, dtype=float))
    base = inner_solve(R, u_bar, cfg)
    if not np.isfinite(base.value):
        return SubgradReport(base.value, [], [], [], None, "undefined")
    findings = [composite_kkt(R.problem, u_bar - R.anchor, xb, tol, active_tol, cfg.feas_tol * 10)
                for xb in base.minimizers]
    ys = [f.y for f in findings if f.found]

    fd = np.full(R.m, np.nan)
    side = np.full(R.m, np.nan)
    status = "ok"
    for j in range(R.m):
        e = np.zeros(R.m)
        e[j] = step
        hi, lo = _p(R, u_bar + e, cfg), _p(R, u_bar - e, cfg)
        if np.isfinite(hi) and np.isfinite(lo):
            fd[j] = (hi - lo) / (2 * step)
        else:
            status = "one-sided"
            if np.isfinite(lo):
                side[j] = (base.value - lo) / step
            elif np.isfinite(hi):
                side[j] = (hi - base.value) / step
    if status != "ok" and np.all(np.isnan(side)):
        status = "undefined"
    rep = SubgradReport(base.value, base.minimizers, findings, ys,
                        fd if status == "ok" else None, status,
                        None if status == "ok" else side)
    if status == "ok" and ys:
        rep.agree = bool(any(np.max(np.abs(y - fd)) <= agree_tol for y in ys))
    if minorant_grid is not None and ys:
        us = np.atleast_2d(np.asarray(minorant_grid, dtype=float))
        if us.shape[0] == 1 and R.m == 1:
            us = us.T
        y = ys[0]
        worst = 0.0
        for u in us:
            pu = _p(R, u, cfg)
            worst = max(worst, base.value + float(y @ (u - u_bar)) - pu)
        rep.minorant_violation = worst
        rep.minorant_ok = worst <= tol
    return rep
