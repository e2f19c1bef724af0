"""Compare the numba kernels with their numpy fallbacks on random graphs.

    python benchmarks/bench_kernels.py [--n 12] [--repeat 3] [--seed 1]

Both variants are called directly (the NICER_EARS_NO_JIT flag only picks
the default binding), outputs are checked for equality and the best wall
time of ``--repeat`` runs is reported.  JIT compile time is excluded by a
warm-up call.
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from nicer_ears import kernels
from nicer_ears.ears import _bfs_distances
from nicer_ears.generators import random_2vc
from nicer_ears.oracle import _masks, _spanning_tree, _tree_join


def build_inputs(name: str, n: int, rng: random.Random) -> tuple:
    g = random_2vc(n, n // 2, rng)
    eu, ev = _masks(g)
    if name == "ham_reach":
        return (g.adjacency_masks(),)
    if name == "ear_dp":
        adj = g.adjacency_masks()
        mult = g.multiplicity_matrix()
        par2 = np.array([sum(1 << j for j in range(n) if mult[i, j] >= 2) for i in range(n)], dtype=np.int64)
        return adj, par2, kernels.ham_reach(adj)
    if name == "matching_table":
        return (_bfs_distances(g),)
    if name == "coset_min":
        tree = _spanning_tree(g)
        in_tree = set(tree)
        basis = [_tree_join(g, tree, frozenset(g.edges[e])) | (1 << e) for e in range(g.m) if e not in in_tree]
        T = frozenset(rng.sample(range(n), 2))
        return eu, ev, g.n, np.int64(_tree_join(g, tree, T)), np.array(basis, dtype=np.int64)
    if name == "min_2ec_subset":
        return eu, ev, g.n, g.n + 1
    if name == "pairing_violation":
        R = rng.sample(range(g.m), min(g.m, 10))
        pa = np.array(R[:4:2], dtype=np.int64)
        pb = np.array(R[1:4:2], dtype=np.int64)
        return eu, ev, g.n, pa, pb, np.array(R[4:], dtype=np.int64)
    raise KeyError(name)


def same(a, b) -> bool:
    if isinstance(a, tuple):
        return len(a) == len(b) and all(same(x, y) for x, y in zip(a, b))
    return bool(np.array_equal(np.asarray(a), np.asarray(b)))


def best_time(fn, args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=12, help="vertices of the random 2VC graph (ear_dp uses min(n, 10))")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)
    print(f"{'kernel':<18} {'numba s':>10} {'numpy s':>10} {'speedup':>8}  equal")
    ok = True
    for name, (jit, fallback) in kernels.VARIANTS.items():
        n = min(args.n, 10) if name in ("ear_dp", "min_2ec_subset") else args.n
        inputs = build_inputs(name, n, random.Random(args.seed))
        eq = same(jit(*inputs), fallback(*inputs))
        ok &= eq
        tj = best_time(jit, inputs, args.repeat)
        tn = best_time(fallback, inputs, args.repeat)
        print(f"{name:<18} {tj:>10.4f} {tn:>10.4f} {tn / tj if tj else float('inf'):>8.1f}  {eq}")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
