"""Worked-example catalog with closed-form oracles.

Each entry builds its model, runs the numeric pipeline and compares the
results with independently derived values.  Oracles live here, beside the
pipeline, never inside it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import cspp as _cspp
from .composite import (CompositeProblem, FunctionFamily, Rockafellian, SolverCfg, inner_solve,
                        penalty_homotopy, pu_sweep, superquantile_minimize)
from .duality import (ClosedFormLagrangian, EqIneqLagrangian, dual_ascent, duality_gap,
                      interior_domain_check, strong_duality_probe, sup_scan)
from .epi import epi_conv_probe, epi_dist, stability_check
from .extreal import INF, NINF
from .intervals import IntervalBox
from .monitoring import IndicatorNonpos, IndicatorZero, MaxCoord, PwaMax
from .optimality import (composite_kkt, fermat_check, lagrange_equality, min_value_subgrad,
                         qualification_check, sum_rule)
from .polymap import PolyMap
from .sets import Box, PositiveRay, WholeSpace

# tolerance tiers
TOL_ALGEBRA = 1e-6
TOL_GRID = 1e-3
TOL_FD = 1e-2

# representative piecewise-affine reward curve (shape only; not measured data)
NAVY_PIECES = ((-5.0, 1.2), (-1.0, 0.4), (-0.2, 0.08))

TOY_GRAPH = """\
# four-vertex instance with an integrality gap of one
p cspp 4 4 1
s 1
t 4
b 4
a 1 2 1 3
a 1 3 2 1
a 2 4 1 3
a 3 4 2 1
"""


@dataclass
class Check:
    name: str
    measured: object
    expected: object
    tol: float
    source: str
    passed: bool = False

    def __post_init__(self):
        m, e = self.measured, self.expected
        if not all(isinstance(v, (int, float, np.floating, np.integer)) for v in (m, e)) \
                or isinstance(e, bool) or isinstance(m, bool):
            self.passed = bool(m == e)
        elif np.isinf(e) or np.isinf(m):
            self.passed = bool(m == e)
        else:
            self.passed = bool(abs(float(m) - float(e)) <= self.tol)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name}: measured {self.measured} expected {self.expected} (tol {self.tol:g})"


@dataclass
class ExampleReport:
    name: str
    checks: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, *args, **kw):
        self.checks.append(Check(*args, **kw))

    def to_dict(self) -> dict:
        out = {"example": self.name, "passed": self.passed}
        for c in self.checks:
            for k in ("measured", "expected"):
                v = c.__dict__[k]
                if isinstance(v, (bool, str)):
                    out[f"{c.name}.{k}"] = v
                elif isinstance(v, tuple):
                    out[f"{c.name}.{k}"] = " ".join(map(str, v))
                else:
                    out[f"{c.name}.{k}"] = float(v)
            out[f"{c.name}.tol"] = c.tol
            out[f"{c.name}.passed"] = c.passed
            out[f"{c.name}.source"] = c.source
        return out

    def lines(self) -> list:
        return [c.line() for c in self.checks]


# --- model constructors ---------------------------------------------------------

def _poly(*coeffs):
    return PolyMap.univariate(list(coeffs))


def constraint_perturbation_rock() -> Rockafellian:
    """minimize x^2 + 1 subject to (x-2)(x-4) + 1 <= 0, perturbed in the constant."""
    P = CompositeProblem(WholeSpace(1), _poly(1, 0, 1), _poly(9, -6, 1), IndicatorNonpos(1))
    return Rockafellian(P, np.array([1.0]))


def cp_value(u: float) -> float:
    if u < -8:
        return 1.0
    if u <= 1:
        return 11 - u - 6 * math.sqrt(1 - u)
    return INF


def cp_argmin(u: float):
    if u < -8:
        return 0.0
    if u <= 1:
        return 3 - math.sqrt(1 - u)
    return None


def cp_epi_formula(u: float) -> float:
    s = math.sqrt(1 - u)
    return math.hypot(2 - s, 6 - u - 6 * s)


def inequality_problem() -> CompositeProblem:
    """minimize x^2 + 1 subject to (x-2)(x-4) <= 0."""
    return CompositeProblem(WholeSpace(1), _poly(1, 0, 1), _poly(8, -6, 1), IndicatorNonpos(1))


def eoq_problem(beta=50.0, rho=1000.0, alpha=25.0, sigma=0.0, tau=0.0, eps=1e-6) -> CompositeProblem:
    F = PolyMap(1, (((beta * rho, (-1,)), (-tau, (0,))), ((alpha / 2, (1,)), (-sigma, (0,)))),
                ("invpoly", "poly"))
    return CompositeProblem(PositiveRay(eps), PolyMap(1, (((0.0, (0,)),),)), F, MaxCoord(2))


def penalty_base() -> CompositeProblem:
    """minimize x^2 subject to 1 - x <= 0."""
    return CompositeProblem(WholeSpace(1), _poly(0, 0, 1), _poly(1, -1), IndicatorNonpos(1))


def slater_problem() -> CompositeProblem:
    return penalty_base()


def slater_failure_problem() -> CompositeProblem:
    """minimize x subject to x^2 <= 0."""
    return CompositeProblem(WholeSpace(1), _poly(0, 1), _poly(0, 0, 1), IndicatorNonpos(1))


def cubic_problem() -> CompositeProblem:
    """minimize x^3 subject to -x <= 0."""
    return CompositeProblem(WholeSpace(1), _poly(0, 0, 0, 1), _poly(0, -1), IndicatorNonpos(1))


def equality_problem() -> CompositeProblem:
    """minimize x1^2 + x2^2 subject to x1 + x2 - 2 = 0."""
    f0 = PolyMap(2, (((1.0, (2, 0)), (1.0, (0, 2))),))
    return CompositeProblem(WholeSpace(2), f0, PolyMap.affine([[1, 1]], [-2]), IndicatorZero(1))


def regularization_family() -> FunctionFamily:
    r = PwaMax(((-1.0, 0.0), (1.0, 0.0)))
    X = Box((-2.0,), (2.0,))

    def fn(u, xs):
        theta = 0.5 + u[0]
        return X.indicator_many(xs) + (xs[:, 0] - 1) ** 2 + theta * r.eval_many(xs)
    return FunctionFamily(fn, n=1, m=1, name="regularization")


SQ_LOSSES = np.array([[0.0, 1.0, 2.0, 3.0], [1.0, 1.5, 2.0, 2.5]])
SQ_PROBS = np.full(4, 0.25)


def superquantile_family() -> FunctionFamily:
    """Joint (x, gamma) objective over two candidate decisions, as a function of gamma.

    ``u`` is the logit of the risk level, so ``1/(1-alpha) = 1 + exp(u)``.
    """
    def fn(u, gs):
        w = 1.0 + math.exp(u[0])
        g = gs[:, 0]
        vals = [g + w * (SQ_PROBS @ np.maximum(0.0, L[:, None] - g[None, :])) for L in SQ_LOSSES]
        return np.min(vals, axis=0)
    return FunctionFamily(fn, n=1, m=1, name="superquantile")


def penalty_family() -> FunctionFamily:
    """``x^2 + (1/|u|) max(0, 1 - x + u)``, and the hard constraint at ``u = 0``."""
    def fn(u, xs):
        x = xs[:, 0]
        if u[0] == 0:
            return np.where(1 - x <= 0, x ** 2, INF)
        return x ** 2 + (1 / abs(u[0])) * np.maximum(0.0, 1 - x + u[0])
    return FunctionFamily(fn, n=1, m=1, name="penalty")


def gap_one_lagrangian() -> ClosedFormLagrangian:
    """``exp(-x1) + y x1^2/x2`` on ``x2 > 0``; inf over x is 0 for every y >= 0."""
    def fn(x, y):
        if x[1] <= 0:
            return INF
        if y[0] < 0:
            return NINF
        return math.exp(-x[0]) + y[0] * x[0] ** 2 / x[1]

    def dual(y):
        return (0.0, None, None) if y[0] >= 0 else (NINF, None, None)
    return ClosedFormLagrangian(fn, dual, [0.0], "gap-one")


def gap_one_numeric_psi(y: float, scales=(1e1, 1e2, 1e3, 1e4), res: int = 401) -> list:
    """Grid infima of the gap-one Lagrangian on growing windows (upper estimates of psi)."""
    out = []
    for B in scales:
        half = np.geomspace(1e-3, B, res // 2)
        x1 = np.concatenate([-half[::-1], [0.0], half])
        x2 = np.geomspace(1e-6 * B, B, res)
        X1, X2 = np.meshgrid(x1, x2)
        vals = np.exp(-np.clip(X1, -700, None)) + y * X1 ** 2 / X2
        out.append(float(vals.min()))
    return out


def slater_failure_lagrangian() -> ClosedFormLagrangian:
    """``x + y x^2``: minimized at ``x = -1/(2y)`` for ``y > 0``."""
    def fn(x, y):
        return NINF if y[0] < 0 else x[0] + y[0] * x[0] ** 2

    def dual(y):
        if y[0] <= 0:
            return NINF, None, None
        x = -1 / (2 * y[0])
        return -1 / (4 * y[0]), x, x * x
    return ClosedFormLagrangian(fn, dual, [0.0], "slater-failure")


def slater_lagrangian() -> ClosedFormLagrangian:
    """``x^2 + y (1 - x)``: minimized at ``x = y/2``."""
    def fn(x, y):
        return NINF if y[0] < 0 else x[0] ** 2 + y[0] * (1 - x[0])

    def dual(y):
        if y[0] < 0:
            return NINF, None, None
        x = y[0] / 2
        return y[0] - y[0] ** 2 / 4, x, 1 - x
    return ClosedFormLagrangian(fn, dual, [0.0], "slater")


def toy_graph() -> _cspp.WeightedGraph:
    return _cspp.parse_graph(TOY_GRAPH)


# --- entries --------------------------------------------------------------------

CFG_1D = dict(lower=[-10.0], upper=[10.0], method="golden")


def ex_constraint_perturbation(**_) -> ExampleReport:
    rep = ExampleReport("constraint-perturbation")
    R = constraint_perturbation_rock()
    cfg = SolverCfg(**CFG_1D)
    src = "closed form 1 / 11-u-6sqrt(1-u) / inf"
    for u in (-8.0, 0.0, 1.0):
        rep.add(f"p({u:g})", inner_solve(R, [u], cfg).value, cp_value(u), TOL_GRID, src)
    rep.add("p(1.2)", inner_solve(R, [1.2], cfg).value, INF, 0.0, "empty feasible set")
    us = np.linspace(-10, 1.5, 60)
    curve = pu_sweep(R, us, cfg)
    err = max(abs(v - cp_value(u)) for u, v in zip(us, curve.values) if np.isfinite(cp_value(u)))
    infs = all(np.isinf(v) for u, v in zip(us, curve.values) if np.isinf(cp_value(u)))
    rep.add("sweep max |p - closed form|", err, 0.0, TOL_GRID, src)
    rep.add("sweep inf above 1", infs, True, 0.0, src)
    st = stability_check(R, [1.0], 1 + 1 / np.arange(1, 11), cfg)
    rep.add("jump at u=1", st.verdict, "unstable", 0.0, "value jumps from 10 to inf")
    rep.add("epi distance at u=1", epi_dist(R.slice([1.0], cfg.feas_tol), (1, 5),
                                           np.linspace(-2, 8, 10001)),
            math.sqrt(29), TOL_GRID, "distance from (1,5) to the point (3,10)")
    rep.info["curve"] = curve
    return rep


def ex_regularization(**_) -> ExampleReport:
    rep = ExampleReport("regularization")
    fam = regularization_family()
    cfg = SolverCfg([-2.5], [2.5], method="golden")
    st = stability_check(fam, [0.0], 1 / np.arange(1, 201), cfg)
    rep.add("verdict", st.verdict, "stable", 0.0, "derived: 1-d oracle per nu")
    # (x-1)^2 + x/2 on x > 0 -> x = 3/4, value 1/16 + 3/8
    rep.add("p(0)", st.p_bar, 1 / 16 + 3 / 8, TOL_GRID, "derived: x = 3/4")
    return rep


def ex_superquantile(**_) -> ExampleReport:
    rep = ExampleReport("superquantile")
    x, gamma, val = superquantile_minimize(SQ_LOSSES, SQ_PROBS, 0.5, ["a", "b"])
    rep.add("decision", x, "b", 0.0, "derived: mean of the worst half, 2.5 vs 2.25")
    rep.add("value", val, 2.25, TOL_ALGEBRA, "derived: sorting oracle")
    alphas = 0.5 + 0.05 / np.arange(1, 31)
    us = np.log(alphas / (1 - alphas))
    st = stability_check(superquantile_family(), [0.0], us[:, None],
                         SolverCfg([-1.0], [4.0], method="golden"))
    rep.add("verdict", st.verdict, "stable", 0.0, "derived: sorting oracle per alpha")
    rep.add("max jump <= 5e-2", st.max_jump <= 5e-2, True, 0.0, "continuity of p")
    rep.info["stability"] = st
    return rep


def ex_penalty_homotopy(**_) -> ExampleReport:
    rep = ExampleReport("penalty-homotopy")
    cfg = SolverCfg(**CFG_1D)
    thetas = 2.0 ** np.arange(1, 13)
    good = penalty_homotopy(penalty_base(), [(-1 / t, t) for t in thetas], cfg)
    rep.add("|x^12 - 1|", good.distances[-1] <= 1e-3, True, 0.0,
            "derived: argmin of x^2 + theta max(0, 1-x+u)")
    rep.add("rate product", float(good.products[-1]), 0.0, TOL_ALGEBRA, "u <= 0 gives 0")
    bad = penalty_homotopy(penalty_base(), [(1 / t, t) for t in thetas], cfg)
    rep.add("violating schedule flagged", bad.flagged, True, 0.0, "product equals 1")
    grid = np.linspace(-3, 3, 6001)
    us = -(2.0 ** -np.arange(1, 15))
    probe = epi_conv_probe(penalty_family(), us, probes=[(0, 0), (0.5, 0.5), (1, 1), (2, 1)],
                           grid=grid)
    rep.add("epi-convergence to the constrained model", probe.verdict, "converged", 0.0,
            "derived: grid evaluation")
    rep.info.update(good=good, bad=bad)
    return rep


def ex_piecewise_subgradients(**_) -> ExampleReport:
    rep = ExampleReport("piecewise-subgradients")
    h = PwaMax(((-2.0, 0.0), (1.0, 0.0)))
    S = h.subdiff([0.0])
    rep.add("kink lo", S.lo[0], -2.0, 0.0, "convex hull of adjacent slopes")
    rep.add("kink hi", S.hi[0], 1.0, 0.0, "convex hull of adjacent slopes")
    navy = PwaMax(NAVY_PIECES)
    k = (NAVY_PIECES[1][1] - NAVY_PIECES[0][1]) / (NAVY_PIECES[0][0] - NAVY_PIECES[1][0])
    S = navy.subdiff([k])
    rep.add("navy kink interval", (S.lo[0], S.hi[0]) == (-5.0, -1.0), True, 0.0,
            "representative pieces, kink at 0.2")
    rep.add("fermat [-1/2, 1]", fermat_check(IntervalBox([-0.5], [1.0])), True, 0.0, "0 inside")
    rep.add("fermat {6}", fermat_check(IntervalBox.point([6.0])), False, 0.0, "0 outside")
    rep.add("sum rule shift", float(sum_rule([1.0], IntervalBox([-2.0], [1.0])).lo[0]), -1.0,
            0.0, "gradient + box")
    return rep


def ex_inequality_sensitivity(**_) -> ExampleReport:
    rep = ExampleReport("inequality-sensitivity")
    P = inequality_problem()
    R = Rockafellian(P)
    cfg = SolverCfg(**CFG_1D)
    kkt = composite_kkt(P, [0.0], [2.0])
    rep.add("multiplier at x=2", float(kkt.y[0]), 2.0, TOL_ALGEBRA, "unique y solving -4 + 2y = 0")
    bad = composite_kkt(P, [0.0], [3.0])
    rep.add("x=3 has no multiplier", bad.status, "no-multiplier", 0.0, "gradient 6, inactive")
    sg = min_value_subgrad(R, [0.0], cfg, minorant_grid=np.linspace(-10, 1.5, 60))
    rep.add("multiplier estimate", float(sg.multipliers[0][0]) if sg.multipliers else np.nan,
            2.0, TOL_ALGEBRA, "subgradient of p at 0 is {2}")
    rep.add("FD slope", float(sg.fd[0]) if sg.fd is not None else np.nan, 2.0, TOL_FD,
            "derivative of 11 - (u+1) - 6 sqrt(-u) ... at 0")
    rep.add("minorant 5 + 2u", bool(sg.minorant_ok), True, 0.0, "convexity of p")
    rep.info["subgrad"] = sg
    return rep


def ex_eoq(beta=50.0, rho=1000.0, alpha=25.0, **_) -> ExampleReport:
    rep = ExampleReport("eoq")
    P = eoq_problem(beta, rho, alpha)
    cfg = SolverCfg([1.0], [500.0], method="golden")
    r = inner_solve(Rockafellian(P), [0.0, 0.0], cfg)
    xstar = math.sqrt(2 * beta * rho / alpha)
    rep.add("x*", float(r.argmin[0]), xstar, TOL_ALGEBRA, "sqrt(2 beta rho / alpha)")
    k = composite_kkt(P, [0.0, 0.0], r.argmin, active_tol=1e-6)
    rep.add("y1", float(k.y[0]), 0.5, TOL_ALGEBRA, "Y(0,x*) = {(1/2,1/2)}")
    rep.add("y2", float(k.y[1]), 0.5, TOL_ALGEBRA, "Y(0,x*) = {(1/2,1/2)}")
    sg = min_value_subgrad(Rockafellian(P), [0.0, 0.0], cfg)
    rep.add("dp/du1", float(sg.fd[0]), 0.5, TOL_FD, "gradient of p at 0")
    rep.add("dp/du2", float(sg.fd[1]), 0.5, TOL_FD, "gradient of p at 0")
    rep.info.update(x=r.argmin, kkt=k, subgrad=sg)
    return rep


def ex_equality_lagrange(**_) -> ExampleReport:
    rep = ExampleReport("equality-lagrange")
    P = equality_problem()
    f = lagrange_equality(P, [1.0, 1.0])
    rep.add("y", float(f.y[0]), -2.0, TOL_ALGEBRA, "2 + y = 0")
    rep.add("x=(2,0) not stationary", lagrange_equality(P, [2.0, 0.0]).status, "no-multiplier",
            0.0, "residual of (4,0) + y(1,1) > 0")
    rep.add("qualification", qualification_check(P, [0.0], [1.0, 1.0])[0], True, 0.0,
            "full row rank")
    return rep


def ex_eqineq_lagrangian(**_) -> ExampleReport:
    rep = ExampleReport("eqineq-lagrangian")
    P = cubic_problem()
    L = EqIneqLagrangian(P.f0, P.F, q=1)
    rep.add("l(1,2)", L.value([1.0], [2.0]), -1.0, TOL_ALGEBRA, "x^3 - xy")
    rep.add("l(1,-1)", L.value([1.0], [-1.0]), NINF, 0.0, "sign restriction")
    G = toy_graph()
    x = _cspp.enumerate_paths(G)[1].x
    Lc = _cspp.CsppLagrangian(G)
    rep.add("cspp l(x,1/2)", Lc.value(x, [0.5]), 4 + 0.5 * (2 - 4), TOL_ALGEBRA,
            "<c,x> + <Dx-d,y>")
    return rep


def ex_cspp_toy(iters=200, t0=0.25, **_) -> ExampleReport:
    rep = ExampleReport("cspp-toy")
    G = toy_graph()
    res = _cspp.cspp_relax(G, iters=iters, t0=t0)
    opt, _ = _cspp.constrained_optimum(_cspp.enumerate_paths(G))
    rep.add("best bound", res.best_bound, 3.0, TOL_GRID, "derived: peak of min(2+2y, 4-2y)")
    rep.add("optimum", opt, 4.0, 0.0, "derived: enumeration")
    rep.add("gap", res.gap, 1.0, TOL_GRID, "derived: 4 - 3")
    rep.info["relax"] = res
    return rep


def ex_cubic_duality(**_) -> ExampleReport:
    rep = ExampleReport("cubic-duality")
    P = cubic_problem()
    cfg = SolverCfg(**CFG_1D)
    L = EqIneqLagrangian(P.f0, P.F, q=1, inner=cfg)
    st = dual_ascent(L, [1.0], iters=50)
    primal = inner_solve(Rockafellian(P), [0.0], cfg).value
    rep.add("halted at iteration 0", (st.status, st.iterations), ("minus-inf", 0), 0.0,
            "psi = -inf for all y")
    psis = [L.dual([y]).psi for y in (0.0, 1.0, 5.0)]
    rep.add("psi == -inf", all(p == NINF for p in psis), True, 0.0, "x^3 unbounded below")
    rep.add("primal", primal, 0.0, TOL_GRID, "x = 0")
    rep.add("gap", duality_gap(primal, NINF).verdict, "infinite", 0.0, "0 - (-inf)")
    return rep


def ex_gap_one(**_) -> ExampleReport:
    rep = ExampleReport("gap-one")
    L = gap_one_lagrangian()
    primal = 1.0      # feasible points have x1 = 0
    dual = max(L.dual([y]).psi for y in (0.0, 0.5, 1.0, 10.0))
    g = duality_gap(primal, dual)
    rep.add("primal", primal, 1.0, TOL_ALGEBRA, "g(x) <= 0 forces x1 = 0")
    rep.add("dual", dual, 0.0, TOL_ALGEBRA, "psi(y) = 0 for y >= 0")
    rep.add("gap", g.gap, 1.0, TOL_ALGEBRA, "1 - 0")
    probe = gap_one_numeric_psi(1.0)
    rep.add("numeric psi(1) >= -1e-2", probe[-1] >= -1e-2, True, 0.0, "grid infima are >= 0")
    rep.add("numeric psi(1) decreasing toward 0", bool(np.all(np.diff(probe) <= 0)
                                                       and probe[-1] < 0.05), True, 0.0,
            "exp(-L) + L^2/x2 -> 0")
    rep.info["probe"] = probe
    return rep


def ex_slater(**_) -> ExampleReport:
    rep = ExampleReport("slater")
    P = slater_problem()
    R = Rockafellian(P)
    cfg = SolverCfg(**CFG_1D)
    primal = inner_solve(R, [0.0], cfg).value
    st = dual_ascent(slater_lagrangian(), [0.0], iters=60, rule="polyak", upper_bound=primal)
    g = duality_gap(primal, st.best_bound)
    rep.add("primal", primal, 1.0, TOL_GRID, "x = 1")
    rep.add("gap", g.gap, 0.0, TOL_ALGEBRA, "slack at x = 2")
    rep.add("interior of dom p", interior_domain_check(R, cfg, 0.5), True, 0.0,
            "p finite for |u| <= 1/2")
    rep.add("argmax", float(st.best_y[0]), 2.0, 1e-3, "psi = y - y^2/4")
    return rep


def ex_slater_failure(**_) -> ExampleReport:
    rep = ExampleReport("slater-failure")
    L = slater_failure_lagrangian()
    R = Rockafellian(slater_failure_problem())
    # exact feasibility: any slack in x^2 <= 0 moves the primal value to -sqrt(slack)
    cfg = SolverCfg([-2.0], [2.0], method="golden", feas_tol=0.0)
    primal = inner_solve(R, [0.0], cfg).value
    st = dual_ascent(L, [1.0], iters=40, rule="polyak", upper_bound=primal)
    sup, _, attained = sup_scan(lambda y: L.dual(y).psi)
    rep.add("sup psi (ascent)", st.best_bound, 0.0, TOL_ALGEBRA, "sup of -1/(4y)")
    rep.add("sup psi (scan)", sup, 0.0, TOL_ALGEBRA, "sup of -1/(4y)")
    rep.add("argmax empty flagged", st.sup_not_attained and not attained, True, 0.0,
            "-1/(4y) < 0 for every y")
    rep.add("0 not interior to dom p", interior_domain_check(R, cfg, 1e-3), False, 0.0,
            "p = inf for u > 0")
    rep.add("gap", duality_gap(primal, st.best_bound).verdict, "strong", 0.0, "0 - 0")
    sweep = pu_sweep(R, [-1.0, -0.25, 0.0, 0.25], cfg)
    rep.add("p(-1/4)", sweep.values[1], -0.5, TOL_GRID, "-sqrt(-u)")
    rep.add("p(1/4)", sweep.values[3], INF, 0.0, "infeasible")
    rep.info["state"] = st
    return rep


def perturbed_dual_slater_failure(u):
    """Dual of ``min x s.t. x^2 + u <= 0``: maximized at ``y = 1/(2 sqrt(-u))``."""
    u = float(np.atleast_1d(u)[0])
    y = 1 / (2 * math.sqrt(-u))
    return -1 / (4 * y) + y * u, np.array([y])


def ex_perturbed_strong_duality(**_) -> ExampleReport:
    rep = ExampleReport("perturbed-strong-duality")
    R = Rockafellian(slater_failure_problem())
    cfg = SolverCfg([-2.0], [2.0], method="golden")
    us = -(2.0 ** -np.arange(0, 21))
    grid = np.linspace(-2, 2, 4001)
    r = strong_duality_probe(R, us, cfg, grid, perturbed_dual_slater_failure)
    rep.add("epi-convergence", r.epi, "converged", 0.0, "feasible sets shrink to {0}")
    rep.add("bounded argmin", r.bounded_argmin, True, 0.0, "dom f(u,.) inside [-1,1]")
    rep.add("liminf <y,u> <= 0", r.condition_c, "pass", 0.0, "-sqrt(-u)/2 -> 0")
    rep.add("zero gap per nu", r.condition_d, "pass", 0.0, "p(u) = -sqrt(-u) = sup psi")
    rep.add("verdict", r.verdict, "strong duality evidence", 0.0, "all four conditions")
    rep.add("limit value", float(r.values[-1]), 0.0, 2e-3, "p(0) = 0")
    return rep


CATALOG: dict = {
    "constraint-perturbation": ex_constraint_perturbation,
    "regularization": ex_regularization,
    "superquantile": ex_superquantile,
    "penalty-homotopy": ex_penalty_homotopy,
    "piecewise-subgradients": ex_piecewise_subgradients,
    "inequality-sensitivity": ex_inequality_sensitivity,
    "eoq": ex_eoq,
    "equality-lagrange": ex_equality_lagrange,
    "eqineq-lagrangian": ex_eqineq_lagrangian,
    "cspp-toy": ex_cspp_toy,
    "cubic-duality": ex_cubic_duality,
    "gap-one": ex_gap_one,
    "slater": ex_slater,
    "slater-failure": ex_slater_failure,
    "perturbed-strong-duality": ex_perturbed_strong_duality,
}


def run_example(name: str, **overrides) -> ExampleReport:
    if name not in CATALOG:
        raise KeyError(f"unknown example {name!r}; available: {', '.join(CATALOG)}")
    return CATALOG[name](**overrides)
