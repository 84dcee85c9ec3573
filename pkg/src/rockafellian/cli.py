"""Command-line entry point: ``rockafellian <subcommand> ...``."""

from __future__ import annotations

import argparse
import itertools
import json
import sys

import numpy as np

from . import catalog
from .composite import SolverCfg, inner_solve, pu_sweep
from .cspp import cspp_relax, constrained_optimum, enumerate_paths, parse_graph
from .duality import CompositeLagrangian, dual_ascent, duality_gap
from .extreal import fmt
from .optimality import composite_kkt, qualification_check
from .problemfile import load_problem


def _floats(text: str) -> list:
    return [float(v) for v in text.split(",") if v.strip()]


def _emit(args, payload: dict, lines: list):
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True, default=_json_default))
    else:
        for ln in lines:
            print(ln)


def _json_default(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    raise TypeError(f"not serializable: {type(v)}")


def _cfg(pf, args, n) -> SolverCfg:
    if args.lower is not None:
        cfg = SolverCfg(_floats(args.lower), _floats(args.upper), method=args.method,
                        resolution=args.resolution, feas_tol=args.feas_tol)
    else:
        cfg = pf.solver_cfg(method=args.method, resolution=args.resolution,
                            feas_tol=args.feas_tol)
    cfg.validate(n)
    return cfg


def cmd_example(args) -> int:
    rep = catalog.run_example(args.name)
    lines = rep.lines() + [f"{'PASS' if rep.passed else 'FAIL'} {rep.name}"]
    _emit(args, rep.to_dict(), lines)
    return 0 if rep.passed else 1


def cmd_selftest(args) -> int:
    ok = True
    payload = {}
    for name in catalog.CATALOG:
        rep = catalog.run_example(name)
        ok &= rep.passed
        payload[name] = rep.passed
        if not args.json:
            for ln in rep.lines():
                print(f"[{name}] {ln}")
    payload["passed"] = ok
    _emit(args, payload, [f"selftest {'PASS' if ok else 'FAIL'}"])
    return 0 if ok else 1


def cmd_sweep(args) -> int:
    pf = load_problem(args.problem)
    R = pf.rockafellian
    if not 1 <= args.dim <= R.m:
        raise ValueError(f"--dim must lie in 1..{R.m}")
    axis = np.linspace(args.start, args.stop, args.steps)
    us = []
    for combo in itertools.product(axis, repeat=args.dim):
        u = R.anchor.copy()
        u[:args.dim] = combo
        us.append(u)
    curve = pu_sweep(R, np.array(us), _cfg(pf, args, R.n))
    # only the swept coordinates go into the CSV
    curve.us = curve.us[:, :args.dim]
    text = curve.to_csv(n=R.n)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {len(us)} rows to {args.out}")
    return 0


def cmd_check(args) -> int:
    pf = load_problem(args.problem)
    P = pf.problem
    x = np.array(_floats(args.point))
    u = np.array(_floats(args.u)) if args.u else pf.anchor
    z_shift = u - pf.anchor
    f = composite_kkt(P, z_shift, x, tol=args.tol, active_tol=args.active_tol)
    payload = {"status": f.status, "residual": f.residual}
    lines = f.report().splitlines()
    if f.status != "infeasible-point":
        ok, witness = qualification_check(P, z_shift, x, active_tol=args.active_tol)
        payload["qualification"] = ok
        lines.append(f"qualification={'holds' if ok else 'fails'}")
        if witness is not None:
            lines.append("witness=" + ",".join(fmt(v) for v in witness))
            payload["witness"] = witness
    if f.y is not None:
        payload.update({f"y_{i + 1}": v for i, v in enumerate(f.y)})
    _emit(args, payload, lines)
    return 0


def cmd_dual(args) -> int:
    pf = load_problem(args.problem)
    R = pf.rockafellian
    cfg = _cfg(pf, args, R.n)
    L = CompositeLagrangian(R, inner=cfg)
    primal = inner_solve(R, R.anchor, cfg).value
    y0 = np.array(_floats(args.y0)) if args.y0 else np.zeros(R.m)
    ub = primal if args.rule == "polyak" else None
    st = dual_ascent(L, y0, iters=args.iters, t0=args.t0, rule=args.rule, upper_bound=ub)
    gap = duality_gap(primal, st.best_bound)
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write(st.to_csv())
    lines = [f"primal={fmt(primal)}", f"best_bound={fmt(st.best_bound)}", f"gap={fmt(gap.gap)}",
             f"verdict={gap.verdict}", f"status={st.status}", f"iterations={st.iterations}"]
    if st.best_y is not None:
        lines.append("best_y=" + ",".join(fmt(v) for v in st.best_y))
    if st.diagnosis:
        lines.append(f"diagnosis={st.diagnosis}")
    payload = {"primal": primal, "best_bound": st.best_bound, "gap": gap.gap,
               "verdict": gap.verdict, "status": st.status, "iterations": st.iterations}
    _emit(args, payload, lines)
    return 0


def cmd_cspp(args) -> int:
    with open(args.graph) as fh:
        G = parse_graph(fh.read())
    res = cspp_relax(G, iters=args.iters, t0=args.t0)
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write(res.state.to_csv())
    lines = [f"bound={fmt(res.best_bound)}"]
    payload = {"bound": res.best_bound, "best_feasible": res.best_length, "gap": res.gap,
               "no_feasible": res.no_feasible}
    if res.best_path is not None:
        lines.append(f"best_feasible={fmt(res.best_length)} path={'-'.join(map(str, res.best_path.vertices))}")
    else:
        lines.append("best_feasible=inf (no feasible path found)")
    lines.append(f"gap={fmt(res.gap)}")
    if args.enumerate:
        opt, best = constrained_optimum(enumerate_paths(G))
        lines.append(f"optimum={fmt(opt)}" + (f" path={'-'.join(map(str, best.vertices))}" if best else ""))
        payload["optimum"] = opt
    _emit(args, payload, lines)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rockafellian", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("example", help="run a catalog entry")
    p.add_argument("name")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("selftest", help="run every catalog entry")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_selftest)

    def solver_opts(p):
        p.add_argument("--problem", required=True)
        p.add_argument("--lower", help="comma-separated solver window (overrides 'box')")
        p.add_argument("--upper")
        p.add_argument("--method", default="golden",
                       choices=("grid", "golden", "projected-gradient"))
        p.add_argument("--resolution", type=int, default=2001)
        p.add_argument("--feas-tol", type=float, default=1e-10,
                       help="slack allowed on indicator constraints")
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("sweep", help="tabulate p(u) over a grid")
    solver_opts(p)
    p.add_argument("--dim", type=int, default=1, help="number of leading u-coordinates swept")
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("check", help="multiplier and qualification check at a point")
    solver_opts(p)
    p.add_argument("--point", required=True)
    p.add_argument("--u")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--active-tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("dual", help="projected supergradient dual ascent")
    solver_opts(p)
    p.add_argument("--iters", type=int, default=200)
    p.add_argument("--t0", type=float, default=1.0)
    p.add_argument("--rule", default="diminishing", choices=("diminishing", "polyak"))
    p.add_argument("--y0")
    p.add_argument("--trace")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("cspp", help="Lagrangian relaxation of a constrained shortest path")
    p.add_argument("--graph", required=True)
    p.add_argument("--enumerate", action="store_true")
    p.add_argument("--iters", type=int, default=200)
    p.add_argument("--t0", type=float, default=0.25)
    p.add_argument("--trace")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_cspp)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
