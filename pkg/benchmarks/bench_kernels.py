"""Compiled vs pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 3] [--max-leaves 8]

Times the exhaustive tree scan (``enumerate_best``) and the definitional
sum (``naive_sum``) on random inputs and prints one row per case, after
checking that both backends return the same answer.
"""

import argparse
import random
import timeit

import numpy as np

from tnctree import _kernels_py as py
from tnctree.kernels import OBJ_EDGECON, OBJ_TOTAL

try:
    from tnctree import _kernels as cy
except ImportError:  # pragma: no cover - depends on build
    cy = None


def random_hypergraph(rng, n, m):
    masks, dims = [], []
    for _ in range(m):
        k = rng.choice((2, 2, 2, 3))
        masks.append(sum(1 << v for v in rng.sample(range(n), k)))
        dims.append(rng.randint(2, 4))
    return masks, dims


def random_sum(rng, n_edges, n_tensors):
    dims = [2] * n_edges
    tensors = []
    for _ in range(n_tensors):
        axes = rng.sample(range(n_edges), 3)
        data = np.random.default_rng(rng.randrange(2**32)).standard_normal(8) + 0j
        tensors.append((data, axes))
    return dims, tensors, []


def best_time(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--max-leaves", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if cy is None:
        raise SystemExit("compiled kernels are not built; run pip install -e . first")
    rng = random.Random(args.seed)

    rows = []
    for n in range(6, args.max_leaves + 1):
        masks, dims = random_hypergraph(rng, n, 2 * n)
        for name, obj in (("total", OBJ_TOTAL), ("edgecon", OBJ_EDGECON)):
            assert cy.enumerate_best(n, masks, dims, obj) == py.enumerate_best(n, masks, dims, obj)
            t_py = best_time(lambda: py.enumerate_best(n, masks, dims, obj), args.repeat)
            t_cy = best_time(lambda: cy.enumerate_best(n, masks, dims, obj), args.repeat)
            rows.append((f"enumerate_best n={n} {name}", t_py, t_cy))

    for n_edges in (12, 16, 18):
        dims, tensors, out = random_sum(rng, n_edges, n_edges // 2)
        assert np.allclose(cy.naive_sum(dims, tensors, out), py.naive_sum(dims, tensors, out))
        t_py = best_time(lambda: py.naive_sum(dims, tensors, out), args.repeat)
        t_cy = best_time(lambda: cy.naive_sum(dims, tensors, out), args.repeat)
        rows.append((f"naive_sum 2^{n_edges}", t_py, t_cy))

    print(f"{'case':<30} {'python s':>10} {'cython s':>10} {'speedup':>9}")
    for name, t_py, t_cy in rows:
        print(f"{name:<30} {t_py:>10.4f} {t_cy:>10.4f} {t_py / t_cy:>8.1f}x")


if __name__ == "__main__":
    main()
