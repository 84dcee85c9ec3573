"""Lagrangian relaxation on random constrained shortest-path instances; gap statistics."""

import argparse

import numpy as np

from rockafellian.cspp import WeightedGraph, constrained_optimum, cspp_relax, enumerate_paths


def random_instance(rng, nv, q):
    edges = [(i, i + 1) for i in range(1, nv)]
    for _ in range(2 * nv):
        i, j = rng.choice(np.arange(1, nv + 1), 2, replace=False)
        edges.append((int(i), int(j)))
    E = len(edges)
    return WeightedGraph(nv, tuple(edges), rng.integers(1, 10, E).astype(float),
                         rng.integers(0, 6, (q, E)).astype(float), 1, nv,
                         rng.integers(4, 15, q).astype(float))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=100)
    ap.add_argument("--vertices", type=int, default=8)
    ap.add_argument("--q", type=int, default=2)
    ap.add_argument("--iters", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    rel_gaps, tight, infeasible = [], 0, 0
    for _ in range(args.instances):
        G = random_instance(rng, args.vertices, args.q)
        r = cspp_relax(G, iters=args.iters)
        opt, _ = constrained_optimum(enumerate_paths(G))
        assert r.best_bound <= opt + 1e-9
        if not np.isfinite(opt):
            infeasible += 1
            continue
        rel_gaps.append((opt - r.best_bound) / max(opt, 1.0))
        tight += int(abs(opt - r.best_bound) <= 1e-6)
    g = np.array(rel_gaps)
    print(f"instances={args.instances} infeasible={infeasible} tight={tight}")
    if g.size:
        print(f"relative bound gap to the optimum: mean={g.mean():.4f} "
              f"median={np.median(g):.4f} max={g.max():.4f}")


if __name__ == "__main__":
    main()
