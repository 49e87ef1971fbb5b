"""Search for contraction trees.

``brute_force_plan`` scans every tree and is the oracle for everything else;
``greedy_plan`` and ``linear_plan`` are the practical planners. Slicing
removes edges and sums the reduced network over their index values.
"""

from __future__ import annotations

import itertools
import math
import os
import random
from dataclasses import dataclass

from . import kernels
from .cost import CostReport, cost_report, min_peak_memory_order
from .network import Network, absorb_open_legs
from .tree import (
    ContractionTree,
    congestion,
    linear_tree,
    root_at_vertex,
    rootings,
    tree_from_order,
)

OBJECTIVES = ("total_time", "vertcon", "edgecon", "parallel_time", "peak_memory")
BRUTE_CAP = int(os.environ.get("TNCTREE_CAP", "10"))
PEAK_CAP = 7
LINEAR_EXACT = 10
LINEAR_PARALLEL_EXACT = 8


class CapExceeded(ValueError):
    """The instance is too large for an exhaustive method."""


@dataclass(frozen=True)
class Objective:
    kind: str = "total_time"

    def __post_init__(self):
        if self.kind not in OBJECTIVES:
            raise ValueError(
                f"unknown objective {self.kind!r}; choose from {', '.join(OBJECTIVES)}"
            )

    def key(self, report: CostReport):
        """Exact sort key of a plan; smaller is better."""
        primary = {
            "total_time": report.sequential_time,
            "vertcon": report.max_node_cost,
            "edgecon": report.max_edge_cost,
            "parallel_time": report.parallel_time,
            "peak_memory": report.peak_memory,
        }[self.kind]
        return (primary, report.sequential_time)


def _objective(objective) -> Objective:
    return objective if isinstance(objective, Objective) else Objective(objective)


def _report(net, tree, obj):
    return cost_report(net, tree, optimize_order=obj.kind == "peak_memory")


def _single(net):
    (v,) = net.tensor_vertices
    adj = {0: [1], 1: [0]}
    leaf_map = {v: 0}
    if net.environment is not None:
        leaf_map[net.environment] = 1
    return ContractionTree(adj, leaf_map, 1)


def _masks(net, labels):
    pos = {v: i for i, v in enumerate(labels) if v is not None}
    masks, dims = [], []
    for e in net.edges:
        m = 0
        for v in e.endpoints:
            m |= 1 << pos[v]
        masks.append(m)
        dims.append(e.dim)
    return masks, dims


def _from_parent(parent, labels, rooted=False):
    adj = {x: [] for x in range(len(parent))}
    for x, p in enumerate(parent):
        if p >= 0:
            adj[x].append(p)
            adj[p].append(x)
    leaf_map = {v: i for i, v in enumerate(labels) if v is not None}
    return ContractionTree(adj, leaf_map, 0 if rooted else None)


def _best_rooting(net, tree):
    best = None
    for t in rootings(tree):
        k = cost_report(net, t).sequential_time
        if best is None or k < best[0]:
            best = (k, t)
    return best[1]


def _bound(net, n):
    return 2 * (n + 1) * math.prod(e.dim for e in net.edges)


def brute_force_plan(net: Network, objective="total_time", cap=None):
    """Optimal tree by scanning every tree; ``(tree, report)``.

    Ties go to the first tree met in enumeration order, then to the smaller
    sequential time. Open legs are bound to the root.
    """
    obj = _objective(objective)
    cap = BRUTE_CAP if cap is None else cap
    net = absorb_open_legs(net)
    verts = net.tensor_vertices
    n = len(verts)
    if not n:
        raise ValueError("network has no tensors to contract")
    limit = min(cap, PEAK_CAP) if obj.kind == "peak_memory" else cap
    if n > limit:
        raise CapExceeded(
            f"{n} tensors exceed the exhaustive cap {limit}; use greedy or linear"
        )
    if n == 1:
        tree = _single(net)
        return tree, _report(net, tree, obj)
    env = net.environment

    if obj.kind in ("vertcon", "edgecon"):
        labels = list(verts) + ([env] if env is not None else [])
        if len(labels) == 2:
            tree = ContractionTree({0: [1], 1: [0]}, {labels[0]: 0, labels[1]: 1})
        else:
            masks, dims = _masks(net, labels)
            code = kernels.OBJ_VERTCON if obj.kind == "vertcon" else kernels.OBJ_EDGECON
            _, parent, _ = kernels.enumerate_best(
                len(labels), masks, dims, code, bound=_bound(net, n)
            )
            tree = _from_parent(parent, labels)
        tree = root_at_vertex(tree, env) if env is not None else _best_rooting(net, tree)
        return tree, _report(net, tree, obj)

    # rooted objectives: leaf 0 stands for the root
    labels = [env] + list(verts)
    if obj.kind == "peak_memory":
        best = None
        for parent in kernels.iter_parent_arrays(n + 1):
            tree = _from_parent(list(parent), labels, rooted=True)
            order, peak, _ = min_peak_memory_order(net, tree)
            key = (peak, sum(congestion(net, tree).node_cost.values()))
            if best is None or key < best[0]:
                best = (key, tree)
        tree = best[1]
        return tree, _report(net, tree, obj)

    # leaf 0 is the root; it carries the environment's wires, if any
    masks, dims = _masks(net, labels)
    code = kernels.OBJ_TOTAL if obj.kind == "total_time" else kernels.OBJ_PARALLEL
    _, parent, _ = kernels.enumerate_best(
        n + 1, masks, dims, code, bound=_bound(net, n)
    )
    tree = _from_parent(parent, labels, rooted=True)
    return tree, _report(net, tree, obj)


# ---------------------------------------------------------------------- #
# greedy
# ---------------------------------------------------------------------- #


def _pair_costs(edges, a, b):
    # (contraction cost, output size) of merging vertex sets a and b
    cost = out = 1
    ab = a | b
    for ends, d in edges:
        ia = bool(ends & a)
        ib = bool(ends & b)
        rest = bool(ends - ab)
        if ia + ib + rest >= 2:
            cost *= d
        if (ia or ib) and rest:
            out *= d
    return cost, out


def greedy_plan(net: Network, objective="total_time", seed=0):
    """Repeatedly contract the best-scoring pair of current tensors.

    The score is the exact cost of the contraction, then the size of its
    result; memory-leaning objectives (edgecon, peak_memory) rank by result
    size first. Remaining ties are broken by a seeded shuffle.
    """
    obj = _objective(objective)
    net = absorb_open_legs(net)
    rng = random.Random(seed)
    blobs = [frozenset((v,)) for v in net.tensor_vertices]
    if not blobs:
        raise ValueError("network has no tensors to contract")
    edges = [(frozenset(e.endpoints), e.dim) for e in net.edges]
    size_first = obj.kind in ("edgecon", "peak_memory")
    order = []
    while len(blobs) > 1:
        cands = []
        for a, b in itertools.combinations(blobs, 2):
            linked = any(ends & a and ends & b for ends, _ in edges)
            cost, out = _pair_costs(edges, a, b)
            score = (out, cost) if size_first else (cost, out)
            cands.append((not linked, score, (a, b)))
        rng.shuffle(cands)
        cands.sort(key=lambda c: (c[0], c[1]))
        a, b = cands[0][2]
        order.append((a, b))
        blobs = [x for x in blobs if x not in (a, b)] + [a | b]
    tree = tree_from_order(net, order)
    return tree, _report(net, tree, obj)


# ---------------------------------------------------------------------- #
# linear orders
# ---------------------------------------------------------------------- #


class _Linear:
    """Costs of caterpillar steps as functions of the prefix set."""

    def __init__(self, net):
        self.verts = net.tensor_vertices
        pos = {v: i for i, v in enumerate(self.verts)}
        self.n = len(self.verts)
        self.full = (1 << self.n) - 1
        self.edges = []
        for e in net.edges:
            m = 0
            out = False
            for v in e.endpoints:
                if v in pos:
                    m |= 1 << pos[v]
                else:
                    out = True
            self.edges.append((m, out, e.dim))
        self.leaf = [self.cut(1 << i) for i in range(self.n)]
        self.output = self.cut(self.full)

    def cut(self, s):
        c = 1
        for m, out, d in self.edges:
            if m & s and (m & ~s or out):
                c *= d
        return c

    def node(self, s, i):
        # merge prefix s with vertex i
        bit = 1 << i
        c = 1
        for m, out, d in self.edges:
            hits = bool(m & s) + bool(m & bit) + bool(m & ~(s | bit) & self.full or out)
            if hits >= 2:
                c *= d
        return c

    def step(self, kind, s, i):
        if kind == "total_time" or kind == "vertcon":
            return self.node(s, i)
        if kind == "edgecon":
            return self.cut(s | (1 << i))
        if kind == "peak_memory":
            return self.cut(s) + self.leaf[i] + self.cut(s | (1 << i))
        raise ValueError(kind)

    def constant(self, kind):
        if kind == "total_time":
            return sum(self.leaf) + self.output
        if kind in ("vertcon", "edgecon"):
            return max(max(self.leaf), self.output)
        return self.output

    def combine(self, kind):
        return (lambda a, b: a + b) if kind == "total_time" else max

    def parallel(self, seq):
        nodes = []
        s = 1 << seq[0]
        for i in seq[1:]:
            nodes.append(self.node(s, i))
            s |= 1 << i
        # leaf k >= 2 enters at node k - 1
        suffix = [0] * (len(nodes) + 1)
        for k in range(len(nodes) - 1, -1, -1):
            suffix[k] = suffix[k + 1] + nodes[k]
        best = max(self.leaf[seq[0]], self.leaf[seq[1]]) + suffix[0]
        for k in range(2, len(seq)):
            best = max(best, self.leaf[seq[k]] + suffix[k - 1])
        return best + self.output

    def exact(self, kind):
        """Subset dynamic program; ``(value, sequence)``."""
        join = self.combine(kind)
        best = {1 << i: (0 if kind == "total_time" else 0, (i,)) for i in range(self.n)}
        for size in range(2, self.n + 1):
            for combo in itertools.combinations(range(self.n), size):
                s = sum(1 << i for i in combo)
                cand = None
                for i in combo:
                    prev = s & ~(1 << i)
                    v0, seq = best[prev]
                    v = join(v0, self.step(kind, prev, i))
                    key = (v, seq + (i,))
                    if cand is None or key < cand:
                        cand = key
                best[s] = cand
        v, seq = best[self.full]
        return join(v, self.constant(kind)), seq

    def greedy(self, kind):
        start = min(range(self.n), key=lambda i: (self.leaf[i], i))
        seq = [start]
        s = 1 << start
        while s != self.full:
            i = min(
                (i for i in range(self.n) if not s >> i & 1),
                key=lambda i: (self.step(kind if kind != "parallel_time" else "total_time", s, i), i),
            )
            seq.append(i)
            s |= 1 << i
        return tuple(seq)


def linear_plan(net: Network, objective="total_time", exact_limit=None):
    """Best caterpillar over vertex orderings; ``(tree, report)``.

    Exact up to ``exact_limit`` tensors (a subset dynamic program, or a full
    scan of orderings for parallel time); beyond that a greedy ordering is
    used and ``report.exact_plan`` is false.
    """
    obj = _objective(objective)
    net = absorb_open_legs(net)
    lin = _Linear(net)
    n = lin.n
    if not n:
        raise ValueError("network has no tensors to contract")
    if n == 1:
        tree = _single(net)
        return tree, _report(net, tree, obj)
    limit = LINEAR_EXACT if exact_limit is None else exact_limit
    exact = True
    if obj.kind == "parallel_time":
        if n <= min(limit, LINEAR_PARALLEL_EXACT):
            seq = min(
                itertools.permutations(range(n)),
                key=lambda p: (lin.parallel(p), p),
            )
        else:
            seq, exact = lin.greedy(obj.kind), False
    elif n <= limit:
        _, seq = lin.exact(obj.kind)
    else:
        seq, exact = lin.greedy(obj.kind), False
    tree = linear_tree(net, [lin.verts[i] for i in seq])
    report = _report(net, tree, obj)
    report.exact_plan = exact
    return tree, report


def linear_optimum(net: Network, objective="total_time"):
    """Optimal value over linear orders, straight from the dynamic program."""
    obj = _objective(objective)
    lin = _Linear(absorb_open_legs(net))
    if obj.kind == "parallel_time":
        return min(lin.parallel(p) for p in itertools.permutations(range(lin.n)))
    return lin.exact(obj.kind)[0]


# ---------------------------------------------------------------------- #
# Pareto set of time and memory
# ---------------------------------------------------------------------- #


def pareto_plans(net: Network, cap=PEAK_CAP):
    """Non-dominated ``(sequential_time, peak_memory, tree)`` over all trees."""
    net = absorb_open_legs(net)
    verts = net.tensor_vertices
    n = len(verts)
    if n > cap:
        raise CapExceeded(f"{n} tensors exceed the Pareto cap {cap}")
    if n == 1:
        tree = _single(net)
        r = cost_report(net, tree)
        return [(r.sequential_time, r.peak_memory, tree)]
    labels = [net.environment] + list(verts)
    points = []
    for parent in kernels.iter_parent_arrays(n + 1):
        tree = _from_parent(list(parent), labels, rooted=True)
        cmap = congestion(net, tree)
        _, peak, _ = min_peak_memory_order(net, tree, cmap)
        points.append((sum(cmap.node_cost.values()), peak, tree))
    points.sort(key=lambda p: (p[0], p[1]))
    front = []
    for t, m, tree in points:
        if not front or m < front[-1][1]:
            front.append((t, m, tree))
    return front


# ---------------------------------------------------------------------- #
# slicing
# ---------------------------------------------------------------------- #


@dataclass(frozen=True)
class SlicePlan:
    """Edges cut out of a network and the reduced network left behind."""

    cut_edges: tuple
    dims: tuple
    reduced: Network

    @property
    def W(self) -> float:
        return sum(math.log2(d) for d in self.dims)

    @property
    def multiplier(self) -> int:
        return math.prod(self.dims)

    def assignments(self):
        return itertools.product(*(range(d) for d in self.dims))


def make_slice_plan(net: Network, cut_edges) -> SlicePlan:
    """Remove ``cut_edges``; the reduced network carries no tensors."""
    cut = []
    for eid in cut_edges:
        e = net.edge(eid)
        if eid in cut:
            raise ValueError(f"edge {eid!r} listed twice")
        if e.is_hyper:
            raise ValueError(f"cannot slice hyperedge {eid!r}")
        if e.is_open or (net.environment is not None and net.environment in e.endpoints):
            raise ValueError(f"cannot slice open leg {eid!r}")
        cut.append(eid)
    keep = [e for e in net.edges if e.id not in set(cut)]
    reduced = Network(net.vertices, keep, None, net.environment)
    return SlicePlan(tuple(cut), tuple(net.edge(e).dim for e in cut), reduced)


def sliced_costs(plan: SlicePlan, inner_tree: ContractionTree, order=None) -> dict:
    """Time is the multiplier times one slice; space is one slice plus the
    index counter."""
    r = cost_report(plan.reduced, inner_tree, order)
    return {
        "assignments": plan.multiplier,
        "W": plan.W,
        "slice_time": r.sequential_time,
        "sequential_time": plan.multiplier * r.sequential_time,
        "slice_peak_memory": r.peak_memory,
        "peak_memory": r.peak_memory + len(plan.cut_edges),
    }


def select_slice_edges(net: Network, k: int) -> list:
    """The ``k`` plain edges of highest edge betweenness, ties by id."""
    import networkx as nx

    g = nx.MultiGraph()
    g.add_nodes_from(net.vertices)
    env = net.environment
    plain = [
        e
        for e in net.edges
        if not e.is_hyper and not e.is_open and env not in e.endpoints
    ]
    for e in plain:
        g.add_edge(*e.endpoints, key=e.id)
    score = {k: s for (_, _, k), s in nx.edge_betweenness_centrality(g).items()}
    ranked = sorted(plain, key=lambda e: (-score[e.id], e.id))
    return [e.id for e in ranked[:k]]
