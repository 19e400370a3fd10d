"""Time the numba kernels against their pure-Python twins.

    python benchmarks/bench_kernels.py [--sizes 8 10 12] [--repeat 3]

Both backends are driven with identical inputs and their results are
compared before any timing is reported.
"""
from __future__ import annotations

import argparse
import random
import time

import numpy as np

from hyperwidth import _kernels
from hyperwidth.games import _Arena
from hyperwidth.generators import random_hypergraph


def random_adjacency(n: int, p: float, seed: int) -> np.ndarray:
    rng = random.Random(seed)
    adj = np.zeros(n, np.int64)
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
    return adj


def best_of(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def bench_treewidth(sizes, repeat):
    for n in sizes:
        adj = random_adjacency(n, 0.35, n)
        _kernels.treewidth_dp(adj, n)  # compile outside the timed region
        tj, rj = best_of(lambda: _kernels.treewidth_dp(adj, n), repeat)
        tp, rp = best_of(lambda: _kernels.treewidth_dp_py(adj, n), repeat)
        assert int(rj[0]) == int(rp[0])
        yield f"treewidth_dp  n={n:<3d}", tj, tp


def bench_marshal(sizes, repeat):
    for n in sizes:
        h = random_hypergraph(n, n, 3, n)
        a = _Arena(h, 2)
        args = (a.adj, h.n, a.blocked, a.state_move, a.state_comp, a.comp_ptr, a.comp_mask,
                a.comp_state, False)
        _kernels.marshal_fixpoint(*args)
        tj, rj = best_of(lambda: _kernels.marshal_fixpoint(*args), repeat)
        tp, rp = best_of(lambda: _kernels.marshal_fixpoint_py(*args), repeat)
        assert np.array_equal(rj[0], rp[0])
        yield f"marshal k=2   n={n:<3d}", tj, tp


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 10, 12])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if not _kernels.USE_NUMBA:
        print("numba backend disabled (HYPERWIDTH_PURE or numba missing); both columns run pure Python")
    print(f"{'kernel':<22}{'numba s':>12}{'pure s':>12}{'speedup':>10}")
    for gen in (bench_treewidth, bench_marshal):
        for name, tj, tp in gen(args.sizes, args.repeat):
            print(f"{name:<22}{tj:>12.5f}{tp:>12.5f}{tp / max(tj, 1e-9):>9.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
