"""Time the compiled shortest-path kernels against the pure-Python fallback.

Builds a random geometric graph, runs ``distances_from`` for every goal and
``lex_path`` for a sample of start nodes, and checks both backends agree.

    python3 benchmarks/bench_kernels.py --nodes 400 --radius 2.5
"""
import argparse
import math
import random
import time

from navprobe import _kernels_py
from navprobe.graph import NavGraph

try:
    from navprobe import _kernels as _kernels_cy
except ImportError:  # extension not built
    _kernels_cy = None


def geometric_graph(n, radius, seed):
    rng = random.Random(seed)
    side = math.sqrt(n) * 1.5
    pos = {f"v{i:05d}": (rng.uniform(0, side), rng.uniform(0, side), rng.uniform(0, 0.5)) for i in range(n)}
    ids = sorted(pos)
    edges = [(a, b) for i, a in enumerate(ids) for b in ids[i + 1:] if math.dist(pos[a], pos[b]) < radius]
    return NavGraph.from_edges("bench", pos, edges)


def run(impl, csr, n, starts):
    indptr, indices, weights = csr
    out = []
    t0 = time.perf_counter()
    for goal in range(n):
        d = impl.distances_from(indptr, indices, weights, goal)
        out.append([impl.lex_path(indptr, indices, weights, d, s, goal) for s in starts])
    return time.perf_counter() - t0, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=400)
    ap.add_argument("--radius", type=float, default=2.5)
    ap.add_argument("--starts", type=int, default=8, help="start nodes per goal for lex_path")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    g = geometric_graph(args.nodes, args.radius, args.seed)
    n = len(g)
    starts = random.Random(args.seed).sample(range(n), min(args.starts, n))
    n_edges = sum(1 for _ in g.edges())
    print(f"graph: {n} nodes, {n_edges} edges; {n} goals x {len(starts)} starts")

    t_py, ref = run(_kernels_py, g.csr, n, starts)
    print(f"{'python':>8}  {t_py:8.3f} s")
    if _kernels_cy is None:
        print(f"{'cython':>8}  not built")
        return 0
    t_cy, got = run(_kernels_cy, g.csr, n, starts)
    same = got == ref
    print(f"{'cython':>8}  {t_cy:8.3f} s   speedup {t_py / t_cy:5.1f}x   identical output: {same}")
    return 0 if same else 1


if __name__ == "__main__":
    raise SystemExit(main())
