"""Measured diameter and worst observed convergence for line, star and random plans.

For each (k, cliques) the script builds the plan, measures the diameter of
the interaction graph, and runs sampled configurations plus the single-symbol
configuration at automaton 0 to report the slowest convergence seen.
"""

import argparse

import numpy as np

from cliquetree.analysis import diameter, predicted_diameter, semantic_digraph
from cliquetree.builder import build_ct, make_plan, project
from cliquetree.rng import SeededDraws


def slowest(net, samples, seed):
    n, k = net.n, net.k
    draws = SeededDraws(seed)
    X = np.array(draws.many_below(k, samples * n), dtype=np.uint8).reshape(samples, n)
    X = np.vstack([X, np.eye(1, n, 0, dtype=np.uint8)])
    target = (X.astype(np.int64).sum(axis=1) % k)[:, None]
    t, cur, done = 0, X, (X == target).all(axis=1)
    while not done.all():
        cur = net.step_many(cur)
        t += 1
        done = (cur == target).all(axis=1)
    return t


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print(f"{'k':>2} {'shape':>9} {'C':>4} {'n':>4} {'diam':>5} {'(n-1)/k':>8} {'slowest':>8}")
    for k in (2, 3, 4):
        for cliques in (1, 4, 16, 64):
            for shape in ("line", "star", "random:1"):
                net = build_ct(make_plan(k, cliques, shape))
                D = diameter(semantic_digraph(net))
                pred = predicted_diameter(k, net.n) if shape == "line" else "-"
                print(f"{k:>2} {shape:>9} {cliques:>4} {net.n:>4} {D:>5} {pred!s:>8} "
                      f"{slowest(net, args.samples, args.seed):>8}")
    print("\nprojection to k=2 at n=289:")
    for m in (1, 2, 4, 8, 16):
        kk = 2 * m
        net = build_ct(make_plan(kk, 288 // kk, "line"))
        net2 = project(net, 2)
        print(f"  CT^{kk} -> 2: clique size {kk + 1}, diameter {diameter(semantic_digraph(net2))}, "
              f"slowest {slowest(net2, args.samples, args.seed)}")


if __name__ == "__main__":
    main()
