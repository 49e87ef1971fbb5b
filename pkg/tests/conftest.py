import math
import random

import networkx as nx
import numpy as np
import pytest

from tnctree.network import Edge, Network
from tnctree.tensor import DenseTensor
from tnctree.tree import ContractionTree


def make_net(vertices, edges, rng=None):
    """``edges`` are ``(id, endpoints, dim)`` triples; tensors if ``rng``."""
    net = Network(vertices, [Edge(i, tuple(ends), d) for i, ends, d in edges])
    if rng is None:
        return net
    from tnctree.generators import random_tensors

    return net.with_tensors(random_tensors(net, rng))


@pytest.fixture
def triangle():
    return make_net("abc", [("ab", "ab", 2), ("bc", "bc", 4), ("ac", "ac", 8)])


@pytest.fixture
def path4():
    return make_net("abcd", [("ab", "ab", 2), ("bc", "bc", 2), ("cd", "cd", 2)])


def star(k, dim=2):
    verts = ["c"] + [f"l{i}" for i in range(k)]
    return make_net(verts, [(f"e{i}", ("c", f"l{i}"), dim) for i in range(k)])


def from_nx(g, dim=2):
    verts = [f"v{i}" for i in g.nodes]
    edges = [(f"e{k}", (f"v{a}", f"v{b}"), dim) for k, (a, b) in enumerate(g.edges)]
    return make_net(verts, edges)


def random_unrooted(labels, rng: random.Random) -> ContractionTree:
    """Uniform-ish random unrooted binary tree by random edge insertion."""
    labels = list(labels)
    if len(labels) == 1:
        return ContractionTree({0: []}, {labels[0]: 0})
    adj = {0: {1}, 1: {0}}
    leaf_map = {labels[0]: 0, labels[1]: 1}
    nxt = 2
    for v in labels[2:]:
        a = rng.choice(sorted(adj))
        b = rng.choice(sorted(adj[a]))
        s, leaf = nxt, nxt + 1
        nxt += 2
        adj[a].discard(b)
        adj[b].discard(a)
        adj[s] = {a, b, leaf}
        adj[a].add(s)
        adj[b].add(s)
        adj[leaf] = {s}
        leaf_map[v] = leaf
    return ContractionTree(adj, leaf_map)


def random_rooted(net, rng: random.Random) -> ContractionTree:
    """Random rooted tree; the environment (if any) is bound to the root."""
    from tnctree.tree import root, root_at_vertex

    if net.environment is not None:
        t = random_unrooted(net.vertices, rng)
        if len(net.vertices) == 1:
            raise ValueError("environment alone")
        return root_at_vertex(t, net.environment)
    t = random_unrooted(net.vertices, rng)
    if len(t.nodes) == 1:
        return root(t)
    return root(t, rng.choice(t.edges))


def containment_congestion(net, tree):
    """Oracle: x lies on the routing of e iff x is an endpoint leaf or the
    endpoint leaves fall into at least two components of T - x."""
    g = nx.Graph()
    g.add_nodes_from(tree.nodes)
    g.add_edges_from(tree.edges)
    node_cost = {}
    for x in tree.nodes:
        h = g.copy()
        h.remove_node(x)
        comp = {y: i for i, cc in enumerate(nx.connected_components(h)) for y in cc}
        c = 1
        for e in net.edges:
            leaves = [tree.leaf(v) for v in e.endpoints]
            if x in leaves or len({comp[y] for y in leaves}) >= 2:
                c *= e.dim
        node_cost[x] = c
    edge_cost = {}
    for a, b in tree.edges:
        h = g.copy()
        h.remove_edge(a, b)
        side = nx.node_connected_component(h, a)
        c = 1
        for e in net.edges:
            inside = {tree.leaf(v) in side for v in e.endpoints}
            if len(inside) == 2:
                c *= e.dim
        edge_cost[(a, b)] = c
    return node_cost, edge_cost


def rel_err(a, b):
    if isinstance(a, DenseTensor):
        assert isinstance(b, DenseTensor)
        assert a.axes == b.axes
        a, b = a.data, b.data
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    scale = np.max(np.abs(b)) if b.size else 0.0
    diff = np.max(np.abs(a - b)) if b.size else 0.0
    if scale < 1e-12:
        return float(diff)
    return float(diff / scale)


def double_factorial(k):
    return math.prod(range(k, 0, -2)) if k > 0 else 1


def all_rooted_trees(net):
    """Every rooted contraction tree of ``net`` (environment at the root)."""
    from tnctree.kernels import iter_parent_arrays

    verts = list(net.tensor_vertices)
    env = net.environment
    labels = [env] + verts
    n = len(labels)
    if n == 2:
        leaf_map = {verts[0]: 0}
        if env is not None:
            leaf_map[env] = 1
        yield ContractionTree({0: [1], 1: [0]}, leaf_map, 1)
        return
    leaf_map = {v: i for i, v in enumerate(labels) if v is not None}
    for parent in iter_parent_arrays(n):
        adj = {x: [] for x in range(len(parent))}
        for x, p in enumerate(parent):
            if p >= 0:
                adj[x].append(p)
                adj[p].append(x)
        yield ContractionTree(adj, leaf_map, 0)


def suite_networks(count=200, seed=2024, hyper=False):
    """The seeded random networks shared by the oracle checks."""
    from tnctree.generators import random_small_network
    from tnctree.network import absorb_open_legs

    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        net = random_small_network(rng, 5, 3, p=0.6, hyper=hyper, open_legs=True)
        net = absorb_open_legs(net)
        if net.environment is not None and len(net.tensor_vertices) < 1:
            continue
        out.append(net)
    return out


# acceptance bookkeeping: one line per criterion in the terminal summary
ACCEPTANCE = {}


def record(criterion, title, ok, detail=""):
    prev = ACCEPTANCE.get(criterion)
    if prev is not None:
        title = prev[0]
        ok = ok and prev[1]
        detail = f"{prev[2]}; {detail}" if detail else prev[2]
    ACCEPTANCE[criterion] = (title, ok, detail)
    line = f"criterion {criterion} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(
            f"criterion {k:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
        )
