"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N] [--quick]

Each kernel is run on the same inputs through both backends; outputs are
compared before timing so a speedup never hides a wrong answer.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from planarcc import _pykernels, kernels
from planarcc.instance import grid_graph, random_planar_graph
from planarcc.oracle import planar_two_colorable_min

try:
    from planarcc import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def _best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    if a is None or b is None:
        return a is b
    return np.allclose(np.asarray(a, dtype=float), np.asarray(b, dtype=float), equal_nan=True)


def cases(quick: bool):
    rng = np.random.default_rng(0)
    side = 40 if quick else 120
    g = grid_graph(side, side)
    indptr, nbr, eid = g.adjacency
    w = rng.uniform(0, 1, g.edge_count)
    yield f"dijkstra grid {side}x{side}", lambda k: k.dijkstra(indptr, nbr, eid, w, 0)
    yield f"bottleneck grid {side}x{side}", lambda k: k.bottleneck_widths(indptr, nbr, eid, w, 0)

    small = random_planar_graph(rng, 14 if quick else 18, 0.6)
    e = small.edges_array
    ws = rng.uniform(-3, 3, small.edge_count)
    eu, ev = np.ascontiguousarray(e[:, 0]), np.ascontiguousarray(e[:, 1])
    yield f"min_bipartition n={small.node_count}", lambda k: k.min_bipartition(small.node_count, eu, ev, ws)

    part = random_planar_graph(rng, 9 if quick else 11, 0.6)
    e2 = part.edges_array
    wp = rng.uniform(-2, 2, part.edge_count)
    pu, pv = np.ascontiguousarray(e2[:, 0]), np.ascontiguousarray(e2[:, 1])
    pa, pb = np.array([0], dtype=np.int64), np.array([part.node_count - 1], dtype=np.int64)
    yield f"min_partition n={part.node_count}", lambda k: k.min_partition(part.node_count, pu, pv, wp, pa, pb)

    n = 200 if quick else 600
    mu = rng.integers(0, n, 8 * n)
    mv = rng.integers(0, n, 8 * n)
    keep = mu != mv
    pairs = {(min(a, b), max(a, b)) for a, b in zip(mu[keep], mv[keep])}
    pairs = sorted(pairs)
    au = np.array([p[0] for p in pairs], dtype=np.int64)
    av = np.array([p[1] for p in pairs], dtype=np.int64)
    aw = rng.uniform(0, 10, len(pairs))
    yield f"max_weight_matching n={n} m={len(pairs)}", lambda k: k.max_weight_matching(n, au, av, aw, True)

    side = 12 if quick else 25
    og = grid_graph(side, side)
    ow = rng.uniform(-1, 1, og.edge_count)
    yield f"oracle (gadget) grid {side}x{side}", lambda k: _with_backend(
        k, lambda: planar_two_colorable_min(og, ow)[1])


def _with_backend(module, fn):
    names = [n for n in kernels.__all__ if n != "BACKEND"]
    saved = {n: getattr(kernels, n) for n in names}
    try:
        for n in names:
            setattr(kernels, n, getattr(module, n))
        return fn()
    finally:
        for n, f in saved.items():
            setattr(kernels, n, f)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--quick", action="store_true")
    args = parser.parse_args()
    if _ckernels is None:
        print("compiled extension not available; nothing to compare")
        return 1
    print(f"{'kernel':40s} {'python s':>10s} {'compiled s':>11s} {'speedup':>8s}  agree")
    for name, run in cases(args.quick):
        tp, op = _best_of(lambda: run(_pykernels), args.repeat)
        tc, oc = _best_of(lambda: run(_ckernels), args.repeat)
        print(f"{name:40s} {tp:10.4f} {tc:11.4f} {tp / tc:8.1f}x  {_same(op, oc)}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
