"""Contraction trees, wire routings and congestions.

A contraction tree is a binary tree whose leaves are in bijection with the
vertices of a network. Each network edge is *routed* along the minimal
subtree spanning its endpoint leaves; the congestion of a tree node or tree
edge is the total weight routed through it. Costs are kept as exact integer
products of bond dimensions and congestions as their log2.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .network import Network


def _edge(a, b):
    return (a, b) if a <= b else (b, a)


class ContractionTree:
    """Rooted or unrooted binary tree with a leaf bijection.

    Parameters
    ----------
    adjacency : mapping of node -> iterable of nodes
        Undirected tree; nodes are integers.
    leaf_map : mapping of vertex id -> node
        Bijection onto the leaves. In a rooted tree the root is normally
        unlabelled, but it may be bound to the environment vertex of a
        network with open legs.
    root : int, optional
        The root node, for rooted trees.
    """

    def __init__(self, adjacency, leaf_map, root=None):
        adj = {int(x): tuple(sorted(int(y) for y in ys)) for x, ys in adjacency.items()}
        for x, ys in list(adj.items()):
            for y in ys:
                adj.setdefault(y, ())
        self._adj = adj
        self.leaf_map = dict(leaf_map)
        self.root = root
        self._validate()
        self._vertex_of = {node: v for v, node in self.leaf_map.items()}

    # -- validation ------------------------------------------------------ #

    def _validate(self):
        adj = self._adj
        if not adj:
            raise ValueError("empty tree")
        nedges = 0
        for x, ys in adj.items():
            if x in ys:
                raise ValueError(f"self-loop at node {x}")
            if len(set(ys)) != len(ys):
                raise ValueError(f"parallel tree edges at node {x}")
            for y in ys:
                if x not in adj[y]:
                    raise ValueError(f"asymmetric adjacency between {x} and {y}")
            nedges += len(ys)
        nedges //= 2
        if nedges != len(adj) - 1:
            raise ValueError("tree must be connected and acyclic")
        start = next(iter(adj))
        seen = {start}
        stack = [start]
        while stack:
            for y in adj[stack.pop()]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(adj):
            raise ValueError("tree must be connected")

        image = list(self.leaf_map.values())
        if len(set(image)) != len(image):
            raise ValueError("leaf map is not injective")
        for node in image:
            if node not in adj:
                raise ValueError(f"leaf map targets unknown node {node}")
        image = set(image)

        root = self.root
        if root is not None:
            if root not in adj:
                raise ValueError(f"root {root} is not a node")
            if len(adj[root]) != 1:
                raise ValueError("root must have exactly one neighbour")
        for x, ys in adj.items():
            d = len(ys)
            if x == root:
                continue
            if d <= 1:
                if x not in image:
                    raise ValueError(f"leaf node {x} carries no vertex")
            elif d == 3:
                if x in image:
                    raise ValueError(f"internal node {x} is mapped to a vertex")
            else:
                raise ValueError(f"node {x} has degree {d}; contraction trees are binary")
        if root is not None:
            top = adj[root][0]
            if len(adj[top]) == 1 and len(adj) != 2:
                raise ValueError("malformed rooted tree")

    # -- structure ------------------------------------------------------- #

    @property
    def is_rooted(self) -> bool:
        return self.root is not None

    @property
    def kind(self) -> str:
        return "rooted" if self.is_rooted else "unrooted"

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(sorted(self._adj))

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted({_edge(x, y) for x, ys in self._adj.items() for y in ys}))

    def neighbors(self, x) -> tuple[int, ...]:
        return self._adj[x]

    def degree(self, x) -> int:
        return len(self._adj[x])

    @property
    def adjacency(self) -> dict:
        return dict(self._adj)

    @property
    def root_vertex(self):
        """Vertex bound to the root (the environment), if any."""
        return self._vertex_of.get(self.root) if self.root is not None else None

    @property
    def leaves(self) -> tuple[int, ...]:
        """Non-root leaves."""
        return tuple(sorted(n for n in self._vertex_of if n != self.root))

    @property
    def internal_nodes(self) -> tuple[int, ...]:
        return tuple(sorted(x for x, ys in self._adj.items() if len(ys) == 3))

    def leaf(self, v) -> int:
        try:
            return self.leaf_map[v]
        except KeyError:
            raise KeyError(f"vertex {v!r} is not in the tree") from None

    def vertex(self, node):
        return self._vertex_of.get(node)

    def is_leaf(self, x) -> bool:
        return x in self._vertex_of and x != self.root

    # -- rooted helpers -------------------------------------------------- #

    def _require_rooted(self):
        if self.root is None:
            raise ValueError("operation requires a rooted contraction tree")

    @cached_property
    def parent(self) -> dict:
        """Parent of every node; towards the root (rooted) or node 0."""
        origin = self.root if self.root is not None else self.nodes[0]
        parent = {origin: None}
        queue = deque([origin])
        while queue:
            x = queue.popleft()
            for y in self._adj[x]:
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
        return parent

    @cached_property
    def depth(self) -> dict:
        depth = {}
        for x in self._bfs_order:
            p = self.parent[x]
            depth[x] = 0 if p is None else depth[p] + 1
        return depth

    @cached_property
    def _bfs_order(self):
        origin = self.root if self.root is not None else self.nodes[0]
        order = [origin]
        for x in order:
            order.extend(y for y in self._adj[x] if self.parent.get(y) == x)
        return order

    def children(self, x) -> tuple[int, ...]:
        p = self.parent[x]
        return tuple(y for y in self._adj[x] if y != p)

    @property
    def top(self) -> int:
        """The node adjacent to the root."""
        self._require_rooted()
        return self._adj[self.root][0]

    @cached_property
    def below(self) -> dict:
        """Vertices in the subtree under each node (rooted orientation)."""
        below = {}
        for x in reversed(self._bfs_order):
            s = set()
            v = self._vertex_of.get(x)
            if v is not None and x != self.root:
                s.add(v)
            for c in self.children(x):
                s |= below[c]
            below[x] = frozenset(s)
        return below

    @property
    def contraction_nodes(self) -> tuple[int, ...]:
        """Internal nodes of a rooted tree, i.e. the pairwise contractions."""
        self._require_rooted()
        return self.internal_nodes

    def path(self, a, b) -> list[int]:
        """Nodes on the unique path from ``a`` to ``b``."""
        parent, depth = self.parent, self.depth
        left, right = [a], [b]
        while depth[left[-1]] > depth[right[-1]]:
            left.append(parent[left[-1]])
        while depth[right[-1]] > depth[left[-1]]:
            right.append(parent[right[-1]])
        while left[-1] != right[-1]:
            left.append(parent[left[-1]])
            right.append(parent[right[-1]])
        right.pop()
        return left + right[::-1]

    # -- identity -------------------------------------------------------- #

    def _ser(self, x, came_from):
        v = self._vertex_of.get(x)
        kids = [y for y in self._adj[x] if y != came_from]
        if not kids:
            return v
        parts = sorted(
            (self._ser(y, x) for y in kids), key=lambda s: (self._minlabel(s), s)
        )
        return "(" + ",".join(parts) + ")"

    @staticmethod
    def _minlabel(s):
        return min(t for t in s.replace("(", " ").replace(")", " ").replace(",", " ").split())

    def canonical(self) -> str:
        """Canonical text form; equal strings mean equal labelled trees."""
        if self.root is not None:
            head = "root" if self.root_vertex is None else f"root={self.root_vertex}"
            top = self.top
            body = self._ser(top, self.root)
            if self.degree(top) == 1:
                body = f"({body})"
            return head + body
        if len(self._adj) == 1:
            return self._vertex_of[self.nodes[0]]
        m = min(self.leaf_map)
        leaf = self.leaf_map[m]
        return "(" + m + "," + self._ser(self._adj[leaf][0], leaf) + ")"

    def __str__(self):
        return self.canonical()

    def __repr__(self):
        return f"ContractionTree({self.canonical()!r})"

    def __eq__(self, other):
        if not isinstance(other, ContractionTree):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def check(self, net: Network):
        """Raise unless the leaves are exactly the network's vertices."""
        have, want = set(self.leaf_map), set(net.vertices)
        bad = sorted(have ^ want)
        if bad:
            where = "tree" if bad[0] in have else "network"
            raise ValueError(
                f"leaf mismatch: vertex {bad[0]!r} appears only in the {where}"
            )
        rv = self.root_vertex
        if rv is not None and rv != net.environment:
            raise ValueError(f"root is bound to {rv!r}, which is not the environment")


# ---------------------------------------------------------------------- #
# routings and congestion
# ---------------------------------------------------------------------- #


@dataclass(frozen=True)
class Routing:
    """Minimal subtree spanning the leaves of one network edge."""

    edge: str
    subtree_nodes: frozenset
    subtree_edges: frozenset


def compute_routings(net: Network, tree: ContractionTree) -> list[Routing]:
    tree.check(net)
    if net.open_legs:
        raise ValueError("network has open legs; call absorb_open_legs first")
    out = []
    for e in net.edges:
        leaves = [tree.leaf(v) for v in e.endpoints]
        nodes = {leaves[0]}
        edges = set()
        for other in leaves[1:]:
            p = tree.path(leaves[0], other)
            nodes.update(p)
            edges.update(_edge(a, b) for a, b in zip(p, p[1:]))
        out.append(Routing(e.id, frozenset(nodes), frozenset(edges)))
    return out


@dataclass(frozen=True)
class CongestionMap:
    """Per-node and per-tree-edge congestion, exact and in log2."""

    node_cost: dict
    tree_edge_cost: dict

    def node_con(self, x) -> float:
        return math.log2(self.node_cost[x])

    def tree_edge_con(self, f) -> float:
        return math.log2(self.tree_edge_cost[_edge(*f)])

    @property
    def max_node_cost(self) -> int:
        return max(self.node_cost.values())

    @property
    def max_edge_cost(self) -> int:
        return max(self.tree_edge_cost.values(), default=1)

    @property
    def vertcon(self) -> float:
        return math.log2(self.max_node_cost)

    @property
    def edgecon(self) -> float:
        return math.log2(self.max_edge_cost)

    def edge_cost(self, a, b) -> int:
        return self.tree_edge_cost[_edge(a, b)]


def congestion(net: Network, tree: ContractionTree, routings=None) -> CongestionMap:
    if routings is None:
        routings = compute_routings(net, tree)
    node_cost = dict.fromkeys(tree.nodes, 1)
    edge_cost = dict.fromkeys(tree.edges, 1)
    for r in routings:
        d = net.edge(r.edge).dim
        for x in r.subtree_nodes:
            node_cost[x] *= d
        for f in r.subtree_edges:
            edge_cost[f] *= d
    return CongestionMap(node_cost, edge_cost)


def unweighted_congestion(net: Network, tree: ContractionTree) -> CongestionMap:
    """Routing counts instead of dimension products (every edge weighs 1)."""
    node_cost = dict.fromkeys(tree.nodes, 0)
    edge_cost = dict.fromkeys(tree.edges, 0)
    for r in compute_routings(net, tree):
        for x in r.subtree_nodes:
            node_cost[x] += 1
        for f in r.subtree_edges:
            edge_cost[f] += 1
    return CongestionMap(node_cost, edge_cost)


# ---------------------------------------------------------------------- #
# orders <-> trees
# ---------------------------------------------------------------------- #


def _as_set(part):
    if isinstance(part, str):
        return frozenset((part,))
    return frozenset(part)


def tree_from_order(net: Network, order) -> ContractionTree:
    """Rooted contraction tree of a contraction order.

    ``order`` is a sequence of pairs ``(S, S')`` of vertex sets (a bare
    vertex id stands for its singleton). Every step must join two disjoint
    sets formed earlier; the last step must leave every tensor-carrying
    vertex merged. An environment vertex, if present, is bound to the root.
    """
    verts = net.tensor_vertices
    node_of = {frozenset((v,)): net.index(v) for v in verts}
    adj = {node_of[frozenset((v,))]: [] for v in verts}
    nxt = len(net.vertices)
    last = None
    for i, step in enumerate(order):
        try:
            a, b = step
        except (TypeError, ValueError):
            raise ValueError(f"step {i}: expected a pair, got {step!r}") from None
        a, b = _as_set(a), _as_set(b)
        for part in (a, b):
            if part not in node_of:
                raise ValueError(
                    f"step {i}: {sorted(part)} is not a current tensor "
                    "(unknown or already consumed)"
                )
        if a & b:
            raise ValueError(f"step {i}: contracts {sorted(a)} with itself")
        na, nb = node_of.pop(a), node_of.pop(b)
        node = nxt
        nxt += 1
        adj[node] = [na, nb]
        adj[na].append(node)
        adj[nb].append(node)
        node_of[a | b] = node
        last = node
    if len(node_of) != 1:
        left = sorted(sorted(s) for s in node_of)
        raise ValueError(
            f"step {len(order)}: order ends with {len(node_of)} tensors {left}"
        )
    if last is None:
        last = next(iter(node_of.values()))
    root = nxt
    adj[root] = [last]
    adj[last].append(root)
    leaf_map = {v: net.index(v) for v in verts}
    if net.environment is not None:
        leaf_map[net.environment] = root
    return ContractionTree(adj, leaf_map, root)


def linear_tree(net: Network, sequence) -> ContractionTree:
    """Rooted caterpillar of the linear order ``(v1, v2, ..., vn)``."""
    sequence = list(sequence)
    if not sequence:
        raise ValueError("empty vertex sequence")
    order = []
    blob = frozenset((sequence[0],))
    for v in sequence[1:]:
        order.append((blob, frozenset((v,))))
        blob = blob | {v}
    return tree_from_order(net, order)


def _node_key(tree, x):
    return sorted(tuple(sorted(tree.below[c])) for c in tree.children(x))


def contraction_step(tree: ContractionTree, x):
    """The ``(S, S')`` pair contracted at internal node ``x``."""
    a, b = sorted((tree.below[c] for c in tree.children(x)), key=sorted)
    return (a, b)


def nodes_to_order(tree: ContractionTree, nodes) -> list:
    return [contraction_step(tree, x) for x in nodes]


def order_to_nodes(tree: ContractionTree, order) -> list[int]:
    """Map a contraction order onto the internal nodes of ``tree``."""
    tree._require_rooted()
    by_set = {tree.below[x]: x for x in tree.internal_nodes}
    nodes = []
    for i, (a, b) in enumerate(order):
        x = by_set.get(_as_set(a) | _as_set(b))
        if x is None or {tree.below[c] for c in tree.children(x)} != {
            _as_set(a),
            _as_set(b),
        }:
            raise ValueError(f"step {i} is not a contraction of this tree")
        nodes.append(x)
    return nodes


def topological_orders(tree: ContractionTree):
    """Every children-before-parents order of the internal nodes.

    Ready nodes are tried in lexicographic order of their contracted
    vertex sets, so the first order yielded is the deterministic default.
    """
    tree._require_rooted()
    internal = set(tree.internal_nodes)
    need = {x: sum(1 for c in tree.children(x) if c in internal) for x in internal}
    key = {x: _node_key(tree, x) for x in internal}
    ready = sorted((x for x in internal if need[x] == 0), key=key.__getitem__)
    out = []

    def rec(ready):
        if len(out) == len(internal):
            yield list(out)
            return
        for i, x in enumerate(ready):
            rest = ready[:i] + ready[i + 1 :]
            p = tree.parent[x]
            if p in internal:
                need[p] -= 1
                if need[p] == 0:
                    rest = sorted(rest + [p], key=key.__getitem__)
            out.append(x)
            yield from rec(rest)
            out.pop()
            if p in internal:
                need[p] += 1

    yield from rec(ready)


def default_order(tree: ContractionTree) -> list[int]:
    return next(topological_orders(tree))


def orders_from_tree(tree: ContractionTree):
    """Contraction orders represented by a rooted tree, default first."""
    for nodes in topological_orders(tree):
        yield nodes_to_order(tree, nodes)


# ---------------------------------------------------------------------- #
# rooting
# ---------------------------------------------------------------------- #


def root(tree: ContractionTree, at=None) -> ContractionTree:
    """Root an unrooted tree by subdividing the tree edge ``at``.

    A single-node tree takes no edge; the root is attached to its leaf.
    """
    if tree.is_rooted:
        raise ValueError("tree is already rooted")
    adj = {x: list(ys) for x, ys in tree.adjacency.items()}
    new = max(adj) + 1
    if len(adj) == 1:
        if at is not None:
            raise ValueError("a single-node tree has no edge to split")
        (only,) = adj
        adj[only].append(new)
        adj[new] = [only]
        return ContractionTree(adj, tree.leaf_map, new)
    if at is None:
        raise ValueError("choose a tree edge to root at")
    a, b = at
    if b not in adj.get(a, ()):
        raise ValueError(f"{at} is not a tree edge")
    split, r = new, new + 1
    adj[a].remove(b)
    adj[b].remove(a)
    adj[a].append(split)
    adj[b].append(split)
    adj[split] = [a, b, r]
    adj[r] = [split]
    return ContractionTree(adj, tree.leaf_map, r)


def root_at_vertex(tree: ContractionTree, v) -> ContractionTree:
    """Make the leaf of ``v`` (normally the environment) the root."""
    if tree.is_rooted:
        raise ValueError("tree is already rooted")
    node = tree.leaf(v)
    if tree.degree(node) != 1:
        raise ValueError("cannot root at the only node of a tree")
    return ContractionTree(tree.adjacency, tree.leaf_map, node)


def unroot(tree: ContractionTree) -> ContractionTree:
    if not tree.is_rooted:
        raise ValueError("tree is already unrooted")
    if tree.root_vertex is not None:
        return ContractionTree(tree.adjacency, tree.leaf_map, None)
    adj = {x: list(ys) for x, ys in tree.adjacency.items()}
    r = tree.root
    top = adj.pop(r)[0]
    adj[top].remove(r)
    if len(adj[top]) == 2:
        a, b = adj.pop(top)
        adj[a].remove(top)
        adj[b].remove(top)
        adj[a].append(b)
        adj[b].append(a)
    return ContractionTree(adj, tree.leaf_map, None)


def rootings(tree: ContractionTree):
    """All rooted versions of an unrooted tree, one per tree edge."""
    if len(tree.nodes) == 1:
        yield root(tree)
        return
    for f in tree.edges:
        yield root(tree, f)
