"""Branch and tree decompositions, and the bridges to contraction trees.

A tree embedding of a graph ``G`` with edge congestion ``k`` gives a branch
decomposition of the line graph ``L(G)`` of width ``k``; conversely a width-``k``
branch decomposition of ``L(G)`` gives an embedding of congestion at most
``k + floor(maxdeg(G) / 3)``. Both directions here count congestion by
routings (every edge weighs one).

Line-graph vertices are the edge ids of the network.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .network import Network, SimpleGraph, line_graph
from .tree import ContractionTree, compute_routings, unweighted_congestion


def _check_tree(adj):
    nodes = list(adj)
    if not nodes:
        raise ValueError("empty tree")
    nedges = sum(len(ys) for ys in adj.values())
    for x, ys in adj.items():
        for y in ys:
            if y not in adj or x not in adj[y]:
                raise ValueError(f"asymmetric adjacency between {x} and {y}")
    if nedges // 2 != len(nodes) - 1:
        raise ValueError("decomposition tree must be connected and acyclic")
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        for y in adj[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != len(nodes):
        raise ValueError("decomposition tree must be connected")


def _freeze(adj):
    out = {int(x): frozenset(int(y) for y in ys) for x, ys in adj.items()}
    for x, ys in list(out.items()):
        for y in ys:
            out.setdefault(y, frozenset())
    return out


def _steiner(adj, terminals):
    """Nodes and edges of the minimal subtree spanning ``terminals``."""
    terminals = set(terminals)
    if not terminals:
        return frozenset(), frozenset()
    start = min(terminals)
    parent = {start: None}
    order = [start]
    for x in order:
        for y in sorted(adj[x]):
            if y not in parent:
                parent[y] = x
                order.append(y)
    count = {x: int(x in terminals) for x in order}
    for x in reversed(order[1:]):
        count[parent[x]] += count[x]
    k = len(terminals)
    edges = set()
    nodes = {start}
    for x in order[1:]:
        if 0 < count[x] < k:
            edges.add((min(x, parent[x]), max(x, parent[x])))
            nodes.update((x, parent[x]))
    # start is a terminal, so every spanning edge is counted above
    return frozenset(nodes), frozenset(edges)


# ---------------------------------------------------------------------- #
# branch decompositions
# ---------------------------------------------------------------------- #


@dataclass(frozen=True)
class BranchDecomposition:
    """Unrooted tree with a bijection from graph edges onto its leaves.

    ``leaf_map`` maps each edge (a 2-element frozenset of vertices) to a
    leaf node; internal nodes have degree three.
    """

    adjacency: dict
    leaf_map: dict

    def __post_init__(self):
        object.__setattr__(self, "adjacency", _freeze(self.adjacency))
        object.__setattr__(
            self, "leaf_map", {frozenset(e): int(x) for e, x in self.leaf_map.items()}
        )

    @property
    def nodes(self):
        return tuple(sorted(self.adjacency))

    @property
    def edges(self):
        return tuple(
            sorted((x, y) for x, ys in self.adjacency.items() for y in ys if x < y)
        )

    def validate(self, graph: SimpleGraph):
        adj = self.adjacency
        if not graph.edges:
            if adj or self.leaf_map:
                raise ValueError("graph has no edges; decomposition must be empty")
            return
        _check_tree(adj)
        missing = set(graph.edges) - set(self.leaf_map)
        extra = set(self.leaf_map) - set(graph.edges)
        if missing:
            raise ValueError(f"bijection: edge {sorted(min(missing, key=sorted))} has no leaf")
        if extra:
            raise ValueError(f"bijection: {sorted(min(extra, key=sorted))} is not a graph edge")
        image = list(self.leaf_map.values())
        if len(set(image)) != len(image):
            raise ValueError("bijection: two edges share a leaf")
        image = set(image)
        for x, ys in adj.items():
            if len(ys) <= 1:
                if x not in image:
                    raise ValueError(f"bijection: leaf {x} carries no edge")
            elif len(ys) == 3:
                if x in image:
                    raise ValueError(f"bijection: internal node {x} carries an edge")
            else:
                raise ValueError(f"node {x} has degree {len(ys)}; expected 1 or 3")

    def middle_sets(self, graph: SimpleGraph) -> dict:
        """Tree edge -> graph vertices with incident edges on both sides."""
        out = {f: set() for f in self.edges}
        for v in graph.vertices:
            leaves = [self.leaf_map[e] for e in graph.edges if v in e]
            _, edges = _steiner(self.adjacency, leaves)
            for f in edges:
                out[f].add(v)
        return out


def branch_width(bd: BranchDecomposition, graph: SimpleGraph) -> int:
    """Largest middle set; 0 when the tree has no edges."""
    bd.validate(graph)
    return max((len(s) for s in bd.middle_sets(graph).values()), default=0)


# ---------------------------------------------------------------------- #
# tree decompositions
# ---------------------------------------------------------------------- #


@dataclass(frozen=True)
class TreeDecomposition:
    adjacency: dict
    bags: dict

    def __post_init__(self):
        object.__setattr__(self, "adjacency", _freeze(self.adjacency))
        object.__setattr__(
            self, "bags", {int(x): frozenset(b) for x, b in self.bags.items()}
        )

    @property
    def edges(self):
        return tuple(
            sorted((x, y) for x, ys in self.adjacency.items() for y in ys if x < y)
        )

    def validate(self, graph: SimpleGraph):
        _check_tree(self.adjacency)
        if set(self.bags) != set(self.adjacency):
            raise ValueError("every tree node needs exactly one bag")
        verts = set(graph.vertices)
        for x, bag in self.bags.items():
            stray = bag - verts
            if stray:
                raise ValueError(f"bag {x} holds non-vertex {sorted(stray, key=str)[0]!r}")
        for e in sorted(graph.edges, key=lambda e: sorted(map(str, e))):
            if not any(e <= bag for bag in self.bags.values()):
                raise ValueError(f"edge coverage: no bag contains edge {sorted(e, key=str)}")
        for v in graph.vertices:
            holding = {x for x, bag in self.bags.items() if v in bag}
            if not holding:
                raise ValueError(f"vertex coverage: no bag contains {v!r}")
            start = min(holding)
            seen = {start}
            stack = [start]
            while stack:
                for y in self.adjacency[stack.pop()]:
                    if y in holding and y not in seen:
                        seen.add(y)
                        stack.append(y)
            if seen != holding:
                raise ValueError(f"connectivity: bags holding {v!r} are not connected")


def tree_width(td: TreeDecomposition, graph: SimpleGraph) -> int:
    td.validate(graph)
    return max(len(b) for b in td.bags.values()) - 1


# ---------------------------------------------------------------------- #
# mutable scratch tree
# ---------------------------------------------------------------------- #


class _Scratch:
    def __init__(self, adj=None):
        self.adj = {x: set(ys) for x, ys in (adj or {}).items()}
        self.label = {}
        self.next = max(self.adj, default=-1) + 1

    def new(self, label=None):
        x = self.next
        self.next += 1
        self.adj[x] = set()
        if label is not None:
            self.label[x] = label
        return x

    def link(self, a, b):
        self.adj[a].add(b)
        self.adj[b].add(a)

    def unlink(self, a, b):
        self.adj[a].discard(b)
        self.adj[b].discard(a)

    def comb(self, roots):
        """Caterpillar over ``roots``; the first root ends nearest the top."""
        roots = list(roots)
        top = roots[-1]
        for r in reversed(roots[:-1]):
            c = self.new()
            self.link(c, top)
            self.link(c, r)
            top = c
        return top

    def subdivide(self, a, b):
        m = self.new()
        self.unlink(a, b)
        self.link(a, m)
        self.link(m, b)
        return m

    def attach(self, label):
        """Hang a new labelled leaf somewhere on the tree."""
        leaf = self.new(label)
        others = [x for x in self.adj if x != leaf]
        if not others:
            return leaf
        if len(others) == 1:
            self.link(leaf, others[0])
            return leaf
        a, b = min(
            (min(x, y), max(x, y)) for x in others for y in self.adj[x]
        )
        m = self.subdivide(a, b)
        self.link(m, leaf)
        return leaf

    def tidy(self):
        """Drop unlabelled leaves and splice out degree-2 nodes."""
        changed = True
        while changed:
            changed = False
            for x in sorted(self.adj):
                if x not in self.adj:
                    continue
                d = len(self.adj[x])
                if x in self.label:
                    continue
                if d <= 1 and len(self.adj) > 1 or d == 0:
                    for y in list(self.adj[x]):
                        self.unlink(x, y)
                    del self.adj[x]
                    changed = True
                elif d == 2:
                    a, b = sorted(self.adj[x])
                    self.unlink(x, a)
                    self.unlink(x, b)
                    self.link(a, b)
                    del self.adj[x]
                    changed = True


def _require_graph_network(net: Network):
    if net.has_hyperedges:
        raise ValueError(
            "hyperedges present; expand each into a copy tensor vertex first"
        )
    if net.open_legs:
        raise ValueError("network has open legs; call absorb_open_legs first")


def _order_edges(net, v):
    return sorted(e.id for e in net.incident(v))


def embedding_to_branch_decomposition(net: Network, tree: ContractionTree) -> BranchDecomposition:
    """Branch decomposition of ``L(net)`` from an unrooted tree embedding.

    Each vertex leaf is replaced by a two-level caterpillar whose leaves are
    the pairs of edges meeting at that vertex; edges at a vertex are taken
    in edge-id order. A pair of parallel edges is placed at its first
    endpoint only.
    """
    _require_graph_network(net)
    if tree.is_rooted:
        raise ValueError("expected an unrooted tree embedding")
    tree.check(net)
    graph = line_graph(net)
    s = _Scratch({x: tree.neighbors(x) for x in tree.nodes})
    placed = set()
    for v in net.vertices:
        l0 = tree.leaf(v)
        es = _order_edges(net, v)
        groups = []
        for i, ei in enumerate(es):
            items = []
            for ej in es[i + 1 :]:
                pair = frozenset((ei, ej))
                if pair in placed:
                    continue
                placed.add(pair)
                items.append(s.new(pair))
            if items:
                groups.append(s.comb(items))
        if not groups:
            continue
        top = s.comb(groups)
        for t0 in list(s.adj[l0]):
            s.unlink(l0, t0)
            s.link(top, t0)
        del s.adj[l0]
    s.tidy()
    leaf_map = {lab: x for x, lab in s.label.items() if x in s.adj}
    if not leaf_map:
        return BranchDecomposition({}, {})
    bd = BranchDecomposition({x: ys for x, ys in s.adj.items()}, leaf_map)
    bd.validate(graph)
    return bd


def branch_decomposition_to_embedding(net: Network, bd: BranchDecomposition) -> ContractionTree:
    """Unrooted tree embedding of ``net`` from a branch decomposition of
    ``L(net)``.

    For each vertex ``v`` a node ``t0`` common to the subtrees of all edges at
    ``v`` is found; the tree edge from ``t0`` towards the neighbour whose side
    misses the fewest of those subtrees is subdivided and the leaf of ``v``
    hung there.
    """
    _require_graph_network(net)
    graph = line_graph(net)
    bd.validate(graph)
    adj = bd.adjacency
    span = {}
    for e in net.edges:
        leaves = [bd.leaf_map[p] for p in graph.edges if e.id in p]
        nodes, _ = _steiner(adj, leaves)
        span[e.id] = nodes

    # choose (t0, t1) on the original tree for every vertex
    choice = {}
    loose = []
    for v in net.vertices:
        es = _order_edges(net, v)
        sets = [span[e] for e in es if span[e]]
        if not sets or len(sets) < len(es):
            loose.append(v)
            continue
        common = frozenset.intersection(*sets)
        if not common:
            raise AssertionError(f"no tree node is shared by every edge at {v!r}")
        t0 = min(common, key=lambda x: (-len(adj[x]), x))
        if not adj[t0]:
            choice[v] = (t0, None)
            continue
        t1 = min(adj[t0], key=lambda t: (sum(1 for e in es if t not in span[e]), t))
        choice[v] = (t0, t1)

    s = _Scratch({x: ys for x, ys in adj.items()})
    on_edge = {}
    for v, (t0, t1) in choice.items():
        if t1 is None:
            s.link(s.new(v), t0)
        else:
            on_edge.setdefault((min(t0, t1), max(t0, t1)), []).append((t0, v))
    for (a, b), hang in sorted(on_edge.items()):
        near_a = [v for t0, v in hang if t0 == a]
        near_b = [v for t0, v in hang if t0 == b]
        chain = near_a + list(reversed(near_b))
        prev = a
        s.unlink(a, b)
        for v in chain:
            m = s.new()
            s.link(prev, m)
            s.link(m, s.new(v))
            prev = m
        s.link(prev, b)

    # endpoints of isolated edges and isolated vertices
    for v in loose:
        mates = [
            u
            for e in net.incident(v)
            for u in e.endpoints
            if u != v and u in loose and net.index(u) < net.index(v)
        ]
        if mates:
            leaf = next(x for x, lab in s.label.items() if lab == mates[0])
            nbrs = sorted(s.adj[leaf])
            if nbrs:
                m = s.subdivide(leaf, nbrs[0])
                s.link(m, s.new(v))
            else:
                s.link(leaf, s.new(v))
        else:
            s.attach(v)

    s.tidy()
    return _to_contraction_tree(net, s)


def _to_contraction_tree(net, s):
    nodes = sorted(s.adj)
    n = len(net.vertices)
    rename = {}
    for x, v in s.label.items():
        if x in s.adj:
            rename[x] = net.index(v)
    k = n
    for x in nodes:
        if x not in rename:
            rename[x] = k
            k += 1
    adj = {rename[x]: [rename[y] for y in s.adj[x]] for x in nodes}
    leaf_map = {v: rename[x] for x, v in s.label.items() if x in s.adj}
    tree = ContractionTree(adj, leaf_map)
    tree.check(net)
    return tree


def validate_embedding_as_tree_decomposition(net: Network, tree: ContractionTree):
    """Read an unrooted embedding as a tree decomposition of ``L(net)``.

    The bag at a tree node holds the edges routed through it. Returns
    ``(td, width)``; ``width + 1`` is the unweighted vertex congestion.
    """
    _require_graph_network(net)
    bags = {x: set() for x in tree.nodes}
    for r in compute_routings(net, tree):
        for x in r.subtree_nodes:
            bags[x].add(r.edge)
    td = TreeDecomposition({x: tree.neighbors(x) for x in tree.nodes}, bags)
    width = tree_width(td, line_graph(net))
    counts = unweighted_congestion(net, tree)
    assert width + 1 == counts.max_node_cost or not net.edges
    return td, width


def tree_to_branch_decomposition(td: TreeDecomposition, graph: SimpleGraph) -> BranchDecomposition:
    """Split-bag conversion; the width is at most ``treewidth + 1``."""
    td.validate(graph)
    if not graph.edges:
        return BranchDecomposition({}, {})
    s = _Scratch({x: ys for x, ys in td.adjacency.items()})
    for e in sorted(graph.edges, key=lambda e: sorted(map(str, e))):
        home = min(x for x, bag in td.bags.items() if e <= bag)
        s.link(home, s.new(e))
    s.tidy()
    # binarise high-degree nodes
    for x in sorted(s.adj):
        if x in s.label or len(s.adj[x]) <= 3:
            continue
        nbrs = sorted(s.adj[x])
        for y in nbrs[2:]:
            s.unlink(x, y)
        top = s.comb(nbrs[2:])
        s.link(x, top)
    s.tidy()
    if len(s.adj) == 1 and not s.label:
        return BranchDecomposition({}, {})
    leaf_map = {lab: x for x, lab in s.label.items()}
    bd = BranchDecomposition(s.adj, leaf_map)
    bd.validate(graph)
    return bd


def import_tree_decomposition(td: TreeDecomposition, net: Network) -> ContractionTree:
    """Contraction tree of ``net`` from a tree decomposition of ``L(net)``.

    Goes through a branch decomposition; the result is valid and its edge
    congestion is at most ``tw + 1 + floor(maxdeg / 3)``. Vertex congestion
    is whatever that tree achieves; no tight bound is promised.
    """
    _require_graph_network(net)
    graph = line_graph(net)
    bd = tree_to_branch_decomposition(td, graph)
    tree = branch_decomposition_to_embedding(net, bd)
    width = branch_width(bd, graph)
    maxdeg = max((len(net.incident(v)) for v in net.vertices), default=0)
    got = unweighted_congestion(net, tree).max_edge_cost
    if got > width + maxdeg // 3 and got > maxdeg:
        raise AssertionError(f"edge congestion {got} exceeds {width} + {maxdeg // 3}")
    return tree


# ---------------------------------------------------------------------- #
# exhaustive widths for small graphs
# ---------------------------------------------------------------------- #


def _graph_edges_sorted(graph):
    return sorted(graph.edges, key=lambda e: sorted(map(str, e)))


def optimal_branch_width(graph: SimpleGraph, cap=9) -> int:
    """Exact branchwidth by scanning every tree on the edges (tiny graphs)."""
    from .kernels import iter_parent_arrays

    edges = _graph_edges_sorted(graph)
    m = len(edges)
    if m > cap:
        raise ValueError(f"{m} edges exceed the exhaustive cap {cap}")
    if m <= 1:
        return 0
    if m == 2:
        return len(edges[0] & edges[1])
    best = None
    for parent in iter_parent_arrays(m):
        adj = {x: set() for x in range(2 * m - 2)}
        for x, p in enumerate(parent):
            if p >= 0:
                adj[x].add(p)
                adj[p].add(x)
        bd = BranchDecomposition(adj, {e: i for i, e in enumerate(edges)})
        w = max(len(s) for s in bd.middle_sets(graph).values())
        if best is None or w < best:
            best = w
    return best


def optimal_tree_width(graph: SimpleGraph) -> int:
    """Exact treewidth by dynamic programming over elimination prefixes."""
    verts = frozenset(graph.vertices)
    if not verts:
        return -1
    nbrs = {v: set(graph.neighbors(v)) for v in verts}
    memo = {frozenset(): -1}

    def q(done, v):
        # vertices outside done + v reachable from v through done
        seen = {v}
        stack = [v]
        out = set()
        while stack:
            for y in nbrs[stack.pop()]:
                if y in seen:
                    continue
                seen.add(y)
                if y in done:
                    stack.append(y)
                else:
                    out.add(y)
        return len(out)

    def best(done):
        hit = memo.get(done)
        if hit is not None:
            return hit
        value = min(max(best(done - {v}), q(done - {v}, v)) for v in done)
        memo[done] = value
        return value

    return best(verts)


# ---------------------------------------------------------------------- #
# PACE text formats
# ---------------------------------------------------------------------- #


def write_td(td: TreeDecomposition, labels) -> str:
    """PACE 2017 ``.td`` text; ``labels`` lists the graph vertices, numbered
    from 1 in that order."""
    num = {v: i + 1 for i, v in enumerate(labels)}
    nodes = sorted(td.adjacency)
    bag_id = {x: i + 1 for i, x in enumerate(nodes)}
    width = max((len(b) for b in td.bags.values()), default=0)
    lines = [f"s td {len(nodes)} {width} {len(labels)}"]
    for x in nodes:
        vs = sorted(num[v] for v in td.bags[x])
        lines.append(" ".join(["b", str(bag_id[x]), *map(str, vs)]))
    for a, b in td.edges:
        lines.append(f"{bag_id[a]} {bag_id[b]}")
    return "\n".join(lines) + "\n"


def _pace_lines(text):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        yield lineno, line.split()


def read_td(text: str, labels) -> TreeDecomposition:
    """Parse PACE ``.td`` text; vertex ``i`` becomes ``labels[i - 1]``."""
    header = None
    bags = {}
    adj = {}
    for lineno, tok in _pace_lines(text):
        try:
            if tok[0] == "s":
                if header is not None:
                    raise ValueError("duplicate solution line")
                if len(tok) != 5 or tok[1] != "td":
                    raise ValueError("expected 's td <bags> <width+1> <vertices>'")
                header = tuple(int(t) for t in tok[2:])
                if header[2] != len(labels):
                    raise ValueError(
                        f"header names {header[2]} vertices, graph has {len(labels)}"
                    )
            elif tok[0] == "b":
                if header is None:
                    raise ValueError("bag before the solution line")
                i = int(tok[1])
                if not 1 <= i <= header[0] or i in bags:
                    raise ValueError(f"bad or repeated bag id {i}")
                vs = [int(t) for t in tok[2:]]
                if any(not 1 <= v <= len(labels) for v in vs):
                    raise ValueError("vertex number out of range")
                bags[i] = {labels[v - 1] for v in vs}
                adj.setdefault(i, set())
            else:
                if header is None or len(tok) != 2:
                    raise ValueError("expected a tree edge 'i j'")
                a, b = int(tok[0]), int(tok[1])
                adj.setdefault(a, set()).add(b)
                adj.setdefault(b, set()).add(a)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if header is None:
        raise ValueError("missing solution line")
    if len(bags) != header[0]:
        raise ValueError(f"header announces {header[0]} bags, found {len(bags)}")
    if set(adj) - set(bags):
        raise ValueError("tree edge names an undeclared bag")
    if max((len(b) for b in bags.values()), default=0) != header[1]:
        raise ValueError("largest bag size does not match the header")
    return TreeDecomposition(adj, bags)


def write_bd(bd: BranchDecomposition, labels) -> str:
    """Branch decomposition in a PACE-like layout.

    ``s bd <nodes> <leaves> <vertices>``, one ``l <node> <u> <v>`` per leaf
    and one ``i j`` per tree edge; nodes and vertices count from 1.
    """
    num = {v: i + 1 for i, v in enumerate(labels)}
    nodes = sorted(bd.adjacency)
    nid = {x: i + 1 for i, x in enumerate(nodes)}
    lines = [f"s bd {len(nodes)} {len(bd.leaf_map)} {len(labels)}"]
    leaves = sorted((nid[x], sorted(num[v] for v in e)) for e, x in bd.leaf_map.items())
    for x, (u, v) in leaves:
        lines.append(f"l {x} {u} {v}")
    for a, b in bd.edges:
        lines.append(f"{nid[a]} {nid[b]}")
    return "\n".join(lines) + "\n"


def read_bd(text: str, labels) -> BranchDecomposition:
    header = None
    leaf_map = {}
    adj = {}
    for lineno, tok in _pace_lines(text):
        try:
            if tok[0] == "s":
                if len(tok) != 5 or tok[1] != "bd":
                    raise ValueError("expected 's bd <nodes> <leaves> <vertices>'")
                header = tuple(int(t) for t in tok[2:])
                if header[2] != len(labels):
                    raise ValueError(
                        f"header names {header[2]} vertices, graph has {len(labels)}"
                    )
                adj = {i: set() for i in range(1, header[0] + 1)}
            elif header is None:
                raise ValueError("content before the solution line")
            elif tok[0] == "l":
                x, u, v = (int(t) for t in tok[1:4])
                if x not in adj:
                    raise ValueError(f"unknown node {x}")
                e = frozenset((labels[u - 1], labels[v - 1]))
                if e in leaf_map:
                    raise ValueError("edge listed twice")
                leaf_map[e] = x
            else:
                a, b = int(tok[0]), int(tok[1])
                if a not in adj or b not in adj:
                    raise ValueError("tree edge names an undeclared node")
                adj[a].add(b)
                adj[b].add(a)
        except (ValueError, IndexError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if header is None:
        raise ValueError("missing solution line")
    if len(leaf_map) != header[1]:
        raise ValueError(f"header announces {header[1]} leaves, found {len(leaf_map)}")
    return BranchDecomposition(adj, leaf_map)


def line_graph_labels(net: Network) -> list:
    """Vertex numbering of ``L(net)`` used by the text formats."""
    return [e.id for e in net.edges]


def mixed_vertex_bound(graph: SimpleGraph) -> int:
    """Lower bound on branchwidth from balanced edge bipartitions.

    Every branch decomposition of a graph with ``m >= 2`` edges has a tree
    edge splitting the edges into parts of size between ``m/3`` and
    ``2m/3``; the minimum number of shared vertices over such splits is
    therefore a lower bound.
    """
    edges = _graph_edges_sorted(graph)
    m = len(edges)
    if m < 2:
        return 0
    lo = -(-m // 3)
    hi = (2 * m) // 3
    best = None
    for k in range(lo, hi + 1):
        for part in itertools.combinations(range(m), k):
            a = set().union(*(edges[i] for i in part))
            rest = set(range(m)) - set(part)
            b = set().union(*(edges[i] for i in rest))
            w = len(a & b)
            if best is None or w < best:
                best = w
    return best
