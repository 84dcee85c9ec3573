"""Dual ascent traces (CSV) for the smooth Slater instance, the Slater-failure instance and the toy graph."""

import argparse
import os

from rockafellian.catalog import slater_failure_lagrangian, slater_lagrangian, toy_graph
from rockafellian.cspp import cspp_relax
from rockafellian.duality import dual_ascent


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="results")
    ap.add_argument("--iters", type=int, default=200)
    args = ap.parse_args(argv)
    os.makedirs(args.outdir, exist_ok=True)

    runs = {
        "slater": dual_ascent(slater_lagrangian(), [0.0], iters=args.iters, t0=1.0),
        "slater_failure": dual_ascent(slater_failure_lagrangian(), [1.0], iters=args.iters,
                                      rule="polyak", upper_bound=0.0),
        "cspp_toy": cspp_relax(toy_graph(), iters=args.iters, t0=0.25).state,
    }
    for name, st in runs.items():
        path = os.path.join(args.outdir, f"dual_{name}.csv")
        with open(path, "w") as fh:
            fh.write(st.to_csv())
        print(f"{name}: best={st.best_bound:.6g} status={st.status} "
              f"sup_not_attained={st.sup_not_attained} -> {path}")


if __name__ == "__main__":
    main()
