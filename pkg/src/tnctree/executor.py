"""Numeric contraction along a rooted contraction tree.

Every contraction is one permute-and-multiply step. A memory tracker
follows the allocate-output-then-free-inputs model so measured peaks can be
compared with :func:`tnctree.cost.peak_memory`.
"""

from __future__ import annotations

import heapq
import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import kernels
from .cost import CostReport, Step
from .network import Network
from .tensor import DenseTensor, _contract
from .tree import ContractionTree, default_order

NAIVE_CAP = 10**7


class MemoryTracker:
    """Live tensor entries, with and without permutation transients."""

    def __init__(self):
        self.live = {}
        self.total = 0
        self.peak = 0
        self.peak_with_transients = 0

    def alloc(self, key, size):
        if key in self.live:
            raise RuntimeError(f"tensor {key!r} allocated twice")
        self.live[key] = size
        self.total += size
        self.peak = max(self.peak, self.total)
        self.peak_with_transients = max(self.peak_with_transients, self.total)

    def transient(self, size):
        self.peak_with_transients = max(self.peak_with_transients, self.total + size)

    def free(self, key):
        self.total -= self.live.pop(key)


def _prepare(net, tree):
    if not tree.is_rooted:
        raise ValueError("execution needs a rooted contraction tree")
    tree.check(net)
    if net.tensors is None:
        raise ValueError("network has no tensors")
    if net.open_legs:
        raise ValueError("network has open legs; call absorb_open_legs first")
    if net.environment is not None and tree.root_vertex != net.environment:
        raise ValueError("the environment vertex must be bound to the root")


def _keep(net, tree, x, a, b):
    inside = tree.below[x]
    shared = set(a.axes).intersection(b.axes)
    return [
        e
        for e in sorted(shared)
        if not set(net.edge(e).endpoints).issubset(inside)
    ]


def _finish(net, t):
    if net.environment is None:
        return complex(t.data.reshape(()))
    return t.transpose(sorted(t.axes))


def execute(net: Network, tree: ContractionTree, order=None):
    """Contract ``net`` along ``tree``; returns ``(value, measured_report)``.

    The value is a complex scalar for closed networks, otherwise the tensor
    facing the environment with axes in sorted edge-id order.
    """
    _prepare(net, tree)
    if order is None:
        order = default_order(tree)
    order = list(order)
    from .cost import _check_order

    _check_order(tree, order)

    tracker = MemoryTracker()
    cost = {}
    results = {}
    steps = []
    mults = 0

    def fetch(c):
        if tree.is_leaf(c):
            t = net.tensors[tree.vertex(c)]
            tracker.alloc(c, t.size)
            cost[c] = t.size
            return t
        return results.pop(c)

    for k, x in enumerate(order):
        c1, c2 = sorted(tree.children(x))
        ready = [c for c in (c1, c2) if tree.is_leaf(c)]
        for c in sorted(ready):
            results[c] = fetch(c)
        a, b = results.pop(c1), results.pop(c2)
        out, n, transient = _contract(a, b, _keep(net, tree, x, a, b))
        tracker.transient(transient)
        tracker.alloc(x, out.size)
        memory = tracker.total
        tracker.free(c1)
        tracker.free(c2)
        results[x] = out
        cost[x] = n
        mults += n
        steps.append(Step(k, x, n, memory, tracker.total))

    top = tree.top
    if not order:
        results[top] = fetch(top)
    final = results.pop(top)
    cost[tree.root] = final.size

    # critical path with measured node costs
    best = (0, [tree.root])
    for leaf in tree.leaves:
        path = tree.path(leaf, tree.root)
        t = sum(cost[p] for p in path)
        if t > best[0]:
            best = (t, path)

    report = CostReport(
        sequential_time=sum(cost.values()),
        peak_memory=max(tracker.peak, final.size),
        parallel_time=best[0],
        vertcon=math.log2(max(cost.values())),
        edgecon=float("nan"),
        max_node_cost=max(cost.values()),
        max_edge_cost=0,
        per_step=steps,
        order=order,
        critical_path=best[1],
        multiplies=mults,
        peak_memory_with_transients=max(tracker.peak_with_transients, final.size),
        node_costs=cost,
    )
    return _finish(net, final), report


def list_schedule(tree: ContractionTree, durations, workers=None):
    """Makespan of running tree nodes as dependent tasks on ``workers``.

    Every node (leaf read, contraction, final write) is a task that may
    start once its children finished. Ready tasks are started heaviest
    remaining path first. ``workers=None`` means unlimited.
    """
    tree._require_rooted()
    level = {}
    for x in tree._bfs_order:
        p = tree.parent[x]
        level[x] = durations[x] + (level[p] if p is not None else 0)
    pending = {x: len(tree.children(x)) for x in tree.nodes}
    ready = [(-level[x], x) for x in tree.nodes if pending[x] == 0]
    heapq.heapify(ready)
    running = []
    now = 0
    cap = math.inf if workers is None else workers
    while ready or running:
        while ready and len(running) < cap:
            _, x = heapq.heappop(ready)
            heapq.heappush(running, (now + durations[x], x))
        now, x = heapq.heappop(running)
        done = [x]
        while running and running[0][0] == now:
            done.append(heapq.heappop(running)[1])
        for y in done:
            p = tree.parent[y]
            if p is not None:
                pending[p] -= 1
                if pending[p] == 0:
                    heapq.heappush(ready, (-level[p], p))
    return now


def execute_parallel(net: Network, tree: ContractionTree, workers=None):
    """Contract independent subtrees concurrently.

    Returns ``(value, makespan)``; the makespan is simulated in model time
    units (node costs) for ``workers`` processors, unlimited if ``None``.
    """
    _prepare(net, tree)
    internal = set(tree.internal_nodes)
    durations = {}
    results = {}

    def run(x):
        c1, c2 = sorted(tree.children(x))
        a = results[c1] if c1 in internal else net.tensors[tree.vertex(c1)]
        b = results[c2] if c2 in internal else net.tensors[tree.vertex(c2)]
        out, n, _ = _contract(a, b, _keep(net, tree, x, a, b))
        return x, out, n

    for leaf in tree.leaves:
        durations[leaf] = net.tensors[tree.vertex(leaf)].size

    pending = {x: sum(1 for c in tree.children(x) if c in internal) for x in internal}
    nthreads = workers or min(32, (os.cpu_count() or 1) + 4)
    with ThreadPoolExecutor(max_workers=nthreads) as pool:
        futures = {pool.submit(run, x) for x in internal if pending[x] == 0}
        while futures:
            fut = next(iter(futures))
            futures.remove(fut)
            x, out, n = fut.result()
            results[x] = out
            durations[x] = n
            p = tree.parent[x]
            if p in internal:
                pending[p] -= 1
                if pending[p] == 0:
                    futures.add(pool.submit(run, p))

    top = tree.top
    final = results[top] if top in internal else net.tensors[tree.vertex(top)]
    durations[tree.root] = final.size
    return _finish(net, final), list_schedule(tree, durations, workers)


def slice_tensors(net: Network, cut_edges, assignment) -> dict:
    """Tensors of ``net`` with each cut edge fixed to its assigned index."""
    fixed = dict(zip(cut_edges, assignment))
    out = {}
    for v, t in net.tensors.items():
        for e in t.axes:
            if e in fixed:
                t = t.select(e, fixed[e])
        out[v] = t
    return out


def execute_sliced(net: Network, plan, inner_tree: ContractionTree, order=None):
    """Sum of the reduced network's value over every cut-index assignment."""
    if net.tensors is None:
        raise ValueError("network has no tensors")
    total = None
    for assignment in plan.assignments():
        reduced = plan.reduced.with_tensors(
            slice_tensors(net, plan.cut_edges, assignment)
        )
        value, _ = execute(reduced, inner_tree, order)
        if total is None:
            total = value
        elif isinstance(value, DenseTensor):
            total = DenseTensor(total.axes, total.data + value.data)
        else:
            total += value
    return total


def naive_oracle(net: Network, cap=NAIVE_CAP):
    """Definitional value: sum over every joint assignment of edge indices."""
    if net.tensors is None:
        raise ValueError("network has no tensors")
    if net.open_legs:
        raise ValueError("network has open legs; call absorb_open_legs first")
    dims = [e.dim for e in net.edges]
    total = math.prod(dims)
    if total > cap:
        raise ValueError(f"{total} index assignments exceed the oracle cap {cap}")
    pos = {e.id: i for i, e in enumerate(net.edges)}
    tensors = [
        (t.flat, [pos[a] for a in t.axes])
        for v, t in net.tensors.items()
    ]
    env = net.environment
    out_ids = sorted(e.id for e in net.incident(env)) if env is not None else []
    flat = kernels.naive_sum(dims, tensors, [pos[e] for e in out_ids])
    if env is None:
        return complex(flat[0])
    shape = [net.edge(e).dim for e in out_ids]
    return DenseTensor(tuple(out_ids), np.asarray(flat).reshape(shape))
