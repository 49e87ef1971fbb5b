"""Exact time, space and parallel-time costs of a contraction tree.

Every tree node costs the product of the bond dimensions routed through it:
leaves are the reads of the input tensors, internal nodes the pairwise
contractions and the root the write of the result. Memory follows the
allocate-output-then-free-inputs model, in units of tensor entries.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

from .network import Network
from .tree import (
    ContractionTree,
    _node_key,
    congestion,
    default_order,
    linear_tree,
)

EXACT_ORDER_LIMIT = 20


@dataclass(frozen=True)
class Step:
    step: int
    node: int
    time: int
    memory: int
    memory_after: int


@dataclass
class CostReport:
    """Predicted (or measured) costs of one (tree, order) pair."""

    sequential_time: int
    peak_memory: int
    parallel_time: int
    vertcon: float
    edgecon: float
    max_node_cost: int
    max_edge_cost: int
    per_step: list = field(default_factory=list)
    order: list = field(default_factory=list)
    critical_path: list = field(default_factory=list)
    exact_order: bool = True
    multiplies: int = 0
    peak_memory_with_transients: int = 0
    node_costs: dict = field(default_factory=dict)
    exact_plan: bool = True

    def summary(self) -> dict:
        return {
            "sequential_time": self.sequential_time,
            "peak_memory": self.peak_memory,
            "parallel_time": self.parallel_time,
            "multiplies": self.multiplies,
            "vertcon": self.vertcon,
            "edgecon": self.edgecon,
            "max_node_cost": self.max_node_cost,
            "max_edge_cost": self.max_edge_cost,
            "log2_sequential_time": math.log2(self.sequential_time),
            "log2_peak_memory": math.log2(self.peak_memory),
            "log2_parallel_time": math.log2(self.parallel_time),
            "exact_order": self.exact_order,
            "exact_plan": self.exact_plan,
        }

    def to_text(self) -> str:
        lines = []
        for k, v in self.summary().items():
            if isinstance(v, bool):
                v = str(v).lower()
            elif isinstance(v, float):
                v = repr(v)
            lines.append(f"{k}={v}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        d = self.summary()
        d["order"] = list(self.order)
        d["critical_path"] = list(self.critical_path)
        d["per_step"] = [asdict(s) for s in self.per_step]
        return json.dumps(d, indent=2, sort_keys=True)


def sequential_time(net: Network, tree: ContractionTree, cmap=None) -> int:
    """Sum of node costs over every node of the tree."""
    cmap = cmap or congestion(net, tree)
    return sum(cmap.node_cost.values())


def _out_cost(tree, cmap, x):
    return cmap.edge_cost(x, tree.parent[x])


def _check_order(tree, order):
    internal = set(tree.internal_nodes)
    done = set()
    for i, x in enumerate(order):
        if x not in internal:
            raise ValueError(f"step {i}: node {x} is not a contraction node")
        if x in done:
            raise ValueError(f"step {i}: node {x} is repeated")
        for c in tree.children(x):
            if c in internal and c not in done:
                raise ValueError(
                    f"step {i}: node {x} comes before its child {c}"
                )
        done.add(x)
    if done != internal:
        raise ValueError(f"order misses nodes {sorted(internal - done)}")


def peak_memory(net: Network, tree: ContractionTree, order=None, cmap=None):
    """Peak memory of contracting ``tree`` in ``order``.

    ``order`` lists the internal nodes children-first; input tensors are
    read just before the contraction that consumes them. The memory of a
    step is the total size of the tree edges crossing from finished to
    pending nodes plus the step's output edge, i.e. the weighted directed
    modified cutwidth at that node.

    Returns ``(peak, steps)``.
    """
    tree._require_rooted()
    cmap = cmap or congestion(net, tree)
    if order is None:
        order = default_order(tree)
    order = list(order)
    _check_order(tree, order)

    # full linear ordering: each leaf right before the node consuming it
    seq = []
    for x in order:
        seq.extend(sorted(c for c in tree.children(x) if tree.is_leaf(c)))
        seq.append(x)
    if not order:
        seq.extend(tree.leaves)
    seq.append(tree.root)
    pos = {x: i for i, x in enumerate(seq)}

    def cut(i):
        # tree edges from seq[:i] to seq[i:]
        return sum(
            c
            for (a, b), c in cmap.tree_edge_cost.items()
            if (pos[a] < i) != (pos[b] < i)
        )

    peak = 0
    for i, x in enumerate(seq):
        mem = cut(i)
        if x != tree.root:
            mem += _out_cost(tree, cmap, x)
        peak = max(peak, mem)

    steps = []
    for k, x in enumerate(order):
        i = pos[x]
        steps.append(
            Step(
                step=k,
                node=x,
                time=cmap.node_cost[x],
                memory=cut(i) + _out_cost(tree, cmap, x),
                memory_after=cut(i + 1),
            )
        )
    return peak, steps


def _step_profile(tree, cmap):
    internal = tree.internal_nodes
    bit = {x: 1 << i for i, x in enumerate(internal)}
    out = {x: _out_cost(tree, cmap, x) for x in internal}
    leaf_in = {
        x: sum(cmap.edge_cost(c, x) for c in tree.children(x) if tree.is_leaf(c))
        for x in internal
    }
    req = {
        x: sum(bit[c] for c in tree.children(x) if c in bit) for x in internal
    }
    freed = {
        x: sum(out[c] for c in tree.children(x) if c in bit) for x in internal
    }
    return internal, bit, out, leaf_in, req, freed


def min_peak_memory_order(net: Network, tree: ContractionTree, cmap=None, limit=None):
    """Topological order minimising peak memory.

    Exact memoised search over sets of finished contractions when the tree
    has at most ``limit`` internal nodes; otherwise a greedy that runs the
    ready contraction with the smallest output first.

    Returns ``(order, peak, exact)``.
    """
    tree._require_rooted()
    cmap = cmap or congestion(net, tree)
    limit = EXACT_ORDER_LIMIT if limit is None else limit
    internal, bit, out, leaf_in, req, freed = _step_profile(tree, cmap)
    final = cmap.edge_cost(tree.root, tree.top)
    if not internal:
        return [], max(final, *(cmap.node_cost[x] for x in tree.leaves)), True
    keyed = sorted(internal, key=lambda x: _node_key(tree, x))
    full = (1 << len(internal)) - 1

    def live(done):
        return sum(out[x] for x in internal if done & bit[x]) - sum(
            freed[x] for x in internal if done & bit[x]
        )

    if len(internal) <= limit:
        memo = {full: (final, None)}

        def best(done):
            hit = memo.get(done)
            if hit is not None:
                return hit[0]
            base = live(done)
            choice = None
            value = None
            for x in keyed:
                if done & bit[x] or req[x] & ~done:
                    continue
                step = base + leaf_in[x] + out[x]
                v = max(step, best(done | bit[x]))
                if value is None or v < value:
                    value, choice = v, x
            memo[done] = (value, choice)
            return value

        peak = best(0)
        order = []
        done = 0
        while done != full:
            x = memo[done][1]
            order.append(x)
            done |= bit[x]
        return order, peak, True

    order = []
    done = 0
    peak = 0
    while done != full:
        base = live(done)
        ready = [x for x in keyed if not done & bit[x] and not req[x] & ~done]
        x = min(ready, key=lambda y: (out[y], base + leaf_in[y] + out[y]))
        peak = max(peak, base + leaf_in[x] + out[x])
        order.append(x)
        done |= bit[x]
    return order, max(peak, final), False


def parallel_time(net: Network, tree: ContractionTree, cmap=None):
    """Heaviest leaf-to-root path, node costs as weights.

    Returns ``(time, critical_path)`` with the path listed leaf first.
    """
    tree._require_rooted()
    cmap = cmap or congestion(net, tree)
    best = None
    for leaf in tree.leaves:
        path = tree.path(leaf, tree.root)
        t = sum(cmap.node_cost[x] for x in path)
        key = (-t, tree.vertex(leaf))
        if best is None or key < best[0]:
            best = (key, t, path)
    if best is None:
        return cmap.node_cost[tree.root], [tree.root]
    return best[1], best[2]


def cost_report(net: Network, tree: ContractionTree, order=None, optimize_order=False):
    """Full :class:`CostReport` for a rooted tree.

    With ``optimize_order`` the memory-optimal order replaces ``order``.
    """
    tree._require_rooted()
    cmap = congestion(net, tree)
    exact = True
    if optimize_order:
        order, _, exact = min_peak_memory_order(net, tree, cmap)
    elif order is None:
        order = default_order(tree)
    peak, steps = peak_memory(net, tree, order, cmap)
    par, path = parallel_time(net, tree, cmap)
    return CostReport(
        sequential_time=sequential_time(net, tree, cmap),
        peak_memory=peak,
        parallel_time=par,
        vertcon=cmap.vertcon,
        edgecon=cmap.edgecon,
        max_node_cost=cmap.max_node_cost,
        max_edge_cost=cmap.max_edge_cost,
        per_step=steps,
        order=list(order),
        critical_path=path,
        exact_order=exact,
        multiplies=sum(cmap.node_cost[x] for x in tree.internal_nodes),
    )


def preallocated_memory(net: Network, tree: ContractionTree, cmap=None) -> int:
    """Space if every tensor that ever exists is allocated up front."""
    cmap = cmap or congestion(net, tree)
    return sum(cmap.tree_edge_cost.values())


def theorem_bounds(net: Network, tree: ContractionTree, cmap=None) -> dict:
    """Coarse bounds of the time and space sums by the maximum congestions."""
    cmap = cmap or congestion(net, tree)
    n = len(tree.leaf_map)
    return {
        "time": sequential_time(net, tree, cmap),
        "time_bound": 2 * n * cmap.max_node_cost,
        "space": preallocated_memory(net, tree, cmap),
        "space_bound": 2 * n * cmap.max_edge_cost,
    }


def schroedinger_plan(circuit, check=True):
    """State-vector simulation as a linear contraction order.

    Builds the network of ``<x| G_1 ... G_m |y>``, the caterpillar of the
    ordering ``(x, G_1, ..., G_m, y)`` and its cost report. With ``check``
    the gate-adjacent contraction nodes are verified to have congestion
    ``n + l_i`` and the spine edges congestion ``n`` (unit weight per wire).
    """
    from .circuits import schroedinger_network

    net = schroedinger_network(circuit)
    seq = ["x", *(f"g{i}" for i in range(len(circuit.gates))), "y"]
    tree = linear_tree(net, seq)
    report = cost_report(net, tree)
    if check:
        cmap = congestion(net, tree)
        n = circuit.n_qubits
        for i, gate in enumerate(circuit.gates):
            x = tree.parent[tree.leaf(f"g{i}")]
            want = 2 ** (n + len(gate.qubits))
            if cmap.node_cost[x] != want:
                raise AssertionError(
                    f"gate {i}: contraction node cost {cmap.node_cost[x]} != {want}"
                )
        for x in tree.internal_nodes:
            p = tree.parent[x]
            if p in tree.internal_nodes and cmap.edge_cost(x, p) != 2**n:
                raise AssertionError(f"spine edge above node {x} is not 2**n")
    return net, tree, report
