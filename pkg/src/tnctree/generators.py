"""Seeded random networks for experiments and tests."""

from __future__ import annotations

import numpy as np

from .network import Edge, Network
from .tensor import DenseTensor

KINDS = ("grid", "ring", "star", "erdos")


def random_tensors(net: Network, rng) -> dict:
    """Complex Gaussian entries for every tensor-carrying vertex."""
    out = {}
    for v in net.tensor_vertices:
        inc = net.incident(v)
        shape = tuple(e.dim for e in inc)
        data = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        out[v] = DenseTensor(tuple(e.id for e in inc), data)
    return out


def random_network(kind, n, dim=2, seed=0, p=0.5, tensors=True) -> Network:
    """``grid`` is n x n, ``ring`` a cycle on n, ``star`` n leaves around a
    centre, ``erdos`` G(n, p)."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")
    if n < 1 or dim < 1:
        raise ValueError("n and dim must be positive")
    rng = np.random.default_rng(seed)
    pairs = []
    if kind == "grid":
        verts = [f"v{i}_{j}" for i in range(n) for j in range(n)]
        for i in range(n):
            for j in range(n):
                if j + 1 < n:
                    pairs.append((f"v{i}_{j}", f"v{i}_{j + 1}"))
                if i + 1 < n:
                    pairs.append((f"v{i}_{j}", f"v{i + 1}_{j}"))
    elif kind == "ring":
        if n < 3:
            raise ValueError("a ring needs n >= 3")
        verts = [f"v{i}" for i in range(n)]
        pairs = [(verts[i], verts[(i + 1) % n]) for i in range(n)]
    elif kind == "star":
        verts = ["c"] + [f"l{i}" for i in range(n)]
        pairs = [("c", f"l{i}") for i in range(n)]
    else:
        verts = [f"v{i}" for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < p:
                    pairs.append((verts[i], verts[j]))
    edges = [Edge(f"e{k}", ends, dim) for k, ends in enumerate(pairs)]
    net = Network(verts, edges)
    if tensors:
        net = net.with_tensors(random_tensors(net, rng))
    return net


def random_small_network(
    rng, max_vertices=5, max_dim=3, p=0.5, hyper=False, open_legs=False
) -> Network:
    """Small random multigraph for property tests.

    ``rng`` is a ``numpy.random.Generator``. With ``hyper`` some edges get a
    third endpoint; with ``open_legs`` some vertices get a dangling leg.
    """
    n = int(rng.integers(1, max_vertices + 1))
    verts = [f"v{i}" for i in range(n)]
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() >= p:
                continue
            for _ in range(1 + int(rng.random() < 0.25)):
                ends = [verts[i], verts[j]]
                if hyper and n > 2 and rng.random() < 0.3:
                    k = int(rng.choice([x for x in range(n) if x not in (i, j)]))
                    ends.append(verts[k])
                dim = int(rng.integers(1, max_dim + 1))
                edges.append(Edge(f"e{len(edges)}", tuple(ends), dim))
    if open_legs:
        for v in verts:
            if rng.random() < 0.3:
                edges.append(Edge(f"e{len(edges)}", (v,), int(rng.integers(1, max_dim + 1))))
    net = Network(verts, edges)
    return net.with_tensors(random_tensors(net, rng))
