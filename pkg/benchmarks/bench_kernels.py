"""Time the compiled kernels against their pure-Python twins.

    python benchmarks/bench_kernels.py [--repeat 5] [--seed 0]

Each kernel runs on the same inputs in both backends; results are checked
for equality before timings are reported.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from survivor import kernels
from survivor.failure import to_mask
from survivor.graph import Network, is_connected


def random_network(rng, n, p):
    while True:
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
        if not edges:
            continue
        raw = rng.exponential(1.0, len(edges))
        net = Network.from_edges(n, edges, raw / raw.sum(), normalized=True)
        if is_connected(net):
            return net


def bfs_order(net):
    order, seen = [0], {0}
    for u in order:
        for _, v in net.incidence[u]:
            if v not in seen:
                seen.add(v)
                order.append(v)
    return order


def workloads(seed):
    rng = np.random.default_rng(seed)
    dense = random_network(rng, 12, 0.45)
    sparse = random_network(rng, 40, 0.08)
    cut_net = random_network(rng, 14, 0.3)
    pair_net = random_network(rng, 9, 0.5)

    def csr_args(net, *rest):
        return (*net.csr, *rest)

    full = dense.mask()
    no_block = bytearray(dense.n)
    paths = kernels.python_backend.simple_paths(*pair_net.csr, 0, 8, pair_net.mask(),
                                                bytearray(pair_net.n), 100_000)
    p1 = paths[0]
    others = [p for p in paths if not set(p) & set(p1)]
    b1 = others[0] if others else paths[-1]
    p2s = [to_mask(p) for p in paths[:300]]
    b2s = [to_mask(p) for p in paths[:300]]
    return [
        ("reach (n=40)", "reach", csr_args(sparse, 0, sparse.mask()), 2000),
        ("simple_paths (n=12)", "simple_paths", csr_args(dense, 0, 11, full, no_block, 10**6), 3),
        ("bonds level 4 (n=14)", "bonds",
         (cut_net.n, [ln.u for ln in cut_net.links], [ln.v for ln in cut_net.links],
          bfs_order(cut_net), 4), 3),
        ("best_pair (300x300)", "best_pair",
         (to_mask(p1), to_mask(b1), p2s, b2s, list(pair_net.pf), 1e-12), 3),
    ]


def timed(func, args, loops, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        for _ in range(loops):
            result = func(*args)
        best = min(best, (time.perf_counter() - start) / loops)
    return best, result


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if kernels.compiled_backend is None:
        print("compiled kernels unavailable (not built, or SURVIVOR_PURE_PYTHON set)")
        return 1
    print(f"{'kernel':<24}{'python':>12}{'cython':>12}{'speedup':>10}")
    for label, name, call_args, loops in workloads(args.seed):
        t_py, r_py = timed(getattr(kernels.python_backend, name), call_args, loops, args.repeat)
        t_cy, r_cy = timed(getattr(kernels.compiled_backend, name), call_args, loops, args.repeat)
        if name == "reach":
            r_py, r_cy = bytes(r_py), bytes(r_cy)
        if name == "bonds":
            r_py, r_cy = sorted(map(sorted, r_py)), sorted(map(sorted, r_cy))
        if r_py != r_cy:
            print(f"{label}: backends disagree")
            return 1
        print(f"{label:<24}{t_py * 1e3:>10.3f}ms{t_cy * 1e3:>10.3f}ms{t_py / t_cy:>9.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
