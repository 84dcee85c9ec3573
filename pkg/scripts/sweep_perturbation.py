"""Tabulate p(u) and P(u) for the perturbed-constraint model next to the closed form."""

import argparse
import csv
import sys

import numpy as np

from rockafellian.catalog import constraint_perturbation_rock, cp_argmin, cp_value
from rockafellian.composite import SolverCfg, pu_sweep
from rockafellian.extreal import fmt


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--from", dest="start", type=float, default=-10.0)
    ap.add_argument("--to", dest="stop", type=float, default=1.5)
    ap.add_argument("--steps", type=int, default=60)
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)

    us = np.linspace(args.start, args.stop, args.steps)
    curve = pu_sweep(constraint_perturbation_rock(), us, SolverCfg([-10.0], [10.0], method="golden"))
    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["u", "p", "p_closed_form", "argmin", "argmin_closed_form"])
    worst = 0.0
    for u, p, am in zip(us, curve.values, curve.argmins):
        ref = cp_value(u)
        ref_x = cp_argmin(u)
        if np.isfinite(ref):
            worst = max(worst, abs(p - ref))
        w.writerow([fmt(u), fmt(p), fmt(ref), fmt(am[0][0]) if am else "",
                    "" if ref_x is None else fmt(ref_x)])
    if fh is not sys.stdout:
        fh.close()
    print(f"max |p - closed form| = {worst:.3e}", file=sys.stderr)


if __name__ == "__main__":
    main()
