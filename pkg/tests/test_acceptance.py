"""Acceptance suite: one test (and one summary line) per criterion.

Run ``pytest tests/test_acceptance.py -v``; the terminal summary ends with
a PASS/FAIL line for each criterion.
"""

import math
import random
import time

import networkx as nx
import numpy as np
import pytest

from conftest import (
    all_rooted_trees,
    containment_congestion,
    from_nx,
    make_net,
    random_rooted,
    random_unrooted,
    record,
    rel_err,
    star,
    suite_networks,
)
from tnctree import decomp
from tnctree.circuits import (
    feynman_network,
    random_circuit,
    statevector_amplitude,
)
from tnctree.cost import cost_report, peak_memory, schroedinger_plan
from tnctree.executor import execute, execute_parallel, execute_sliced, list_schedule, naive_oracle
from tnctree.formats import format_network, format_tree, parse_network, parse_tree
from tnctree.generators import random_small_network
from tnctree.network import absorb_open_legs, line_graph
from tnctree.planner import brute_force_plan, make_slice_plan
from tnctree.tree import (
    congestion,
    orders_from_tree,
    root,
    root_at_vertex,
    topological_orders,
    tree_from_order,
    unroot,
    unweighted_congestion,
)

K6_BD_ADJ = {
    0: [26], 1: [20], 2: [8, 12, 14], 3: [10], 4: [5, 22, 26], 5: [4],
    6: [12, 20, 24], 7: [24], 8: [2, 10, 16], 9: [16], 10: [3, 8, 11], 11: [10],
    12: [2, 6, 13], 13: [12], 14: [2, 15, 22], 15: [14], 16: [8, 9, 18], 17: [18],
    18: [16, 17, 19], 19: [18], 20: [1, 6, 21], 21: [20], 22: [4, 14, 23], 23: [22],
    24: [6, 7, 25], 25: [24], 26: [0, 4, 27], 27: [26],
}
K6_BD_LEAVES = {
    (1, 4): 21, (2, 4): 23, (0, 1): 7, (0, 3): 11, (1, 5): 1, (0, 2): 9,
    (1, 3): 5, (0, 5): 17, (4, 5): 13, (2, 3): 0, (0, 4): 25, (1, 2): 27,
    (3, 5): 3, (3, 4): 15, (2, 5): 19,
}


@pytest.fixture(scope="module")
def suite():
    return suite_networks(200, seed=2024)


def _cutwidth_oracle(tree, cmap, order):
    """Peak of the live-tensor simulation: inputs read just in time,
    outputs allocated before the inputs are freed."""
    out = {x: cmap.edge_cost(x, tree.parent[x]) for x in tree.nodes if x != tree.root}
    live = 0
    peak = 0
    for x in order:
        leaves = sorted(c for c in tree.children(x) if tree.is_leaf(c))
        for c in leaves:
            peak = max(peak, live + out[c])
            live += out[c]
        peak = max(peak, live + out[x])
        live += out[x] - sum(out[c] for c in tree.children(x))
    if not order:
        peak = max(peak, out[tree.top])
    return max(peak, live)


# ---------------------------------------------------------------------- #


def test_criterion_1_oracle_equivalence(suite):
    t0 = time.perf_counter()
    runs = 0
    worst = 0.0
    for net in suite:
        ref = naive_oracle(net)
        for tree in all_rooted_trees(net):
            for order in topological_orders(tree):
                value, _ = execute(net, tree, order)
                worst = max(worst, rel_err(value, ref))
                runs += 1
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-9 and elapsed < 60
    record(
        1,
        "execute == naive oracle, every tree and order",
        ok,
        f"{len(suite)} networks, {runs} runs, max rel err {worst:.2e}, {elapsed:.1f}s",
    )
    assert ok


def test_criterion_2_time_formula(suite):
    bad = 0
    runs = 0
    for net in suite:
        for tree in all_rooted_trees(net):
            cmap = congestion(net, tree)
            want = sum(cmap.node_cost[x] for x in tree.internal_nodes)
            for order in topological_orders(tree):
                _, measured = execute(net, tree, order)
                runs += 1
                if measured.multiplies != want:
                    bad += 1
                if measured.sequential_time != sum(cmap.node_cost.values()):
                    bad += 1
    ok = bad == 0
    record(2, "measured multiply-adds == sum of node costs", ok, f"{runs} runs, {bad} mismatches")
    assert ok


def test_criterion_3_space_formula(suite):
    bad = 0
    runs = 0
    for net in suite:
        for tree in all_rooted_trees(net):
            cmap = congestion(net, tree)
            for nodes in topological_orders(tree):
                _, measured = execute(net, tree, nodes)
                model, _ = peak_memory(net, tree, nodes, cmap)
                oracle = _cutwidth_oracle(tree, cmap, nodes)
                runs += 1
                if not measured.peak_memory == model == oracle:
                    bad += 1
    ok = bad == 0
    record(3, "tracker peak == directed modified cutwidth", ok, f"{runs} orders, {bad} mismatches")
    assert ok


def test_criterion_4_parallel_time():
    rng = random.Random(4)
    nrng = np.random.default_rng(4)
    bad = 0
    count = 0
    while count < 100:
        net = absorb_open_legs(random_small_network(nrng, 6, 3, p=0.6, open_legs=True))
        if len(net.tensor_vertices) < 2:
            continue
        tree = random_rooted(net, rng)
        cmap = congestion(net, tree)
        # heaviest leaf-to-root path by dynamic programming from the root
        g = nx.DiGraph()
        for x in tree.nodes:
            p = tree.parent[x]
            if p is not None:
                g.add_edge(x, p)
        heavy = {}
        for x in reversed(list(nx.topological_sort(g))):
            succ = list(g.successors(x))
            heavy[x] = cmap.node_cost[x] + (heavy[succ[0]] if succ else 0)
        want = max(heavy[x] for x in tree.leaves)
        simulated = list_schedule(tree, cmap.node_cost, workers=None)
        report = cost_report(net, tree)
        _, makespan = execute_parallel(net, tree, workers=None)
        if not simulated == report.parallel_time == makespan == want:
            bad += 1
        count += 1
    ok = bad == 0
    record(4, "unlimited-worker makespan == heaviest leaf-root path", ok, f"{count} trees, {bad} mismatches")
    assert ok


def test_criterion_5_congestion_inequality():
    graphs = [g for g in nx.graph_atlas_g() if 1 <= g.number_of_nodes() <= 6]
    bad = []
    for g in graphs:
        net = from_nx(g, dim=2)
        _, rv = brute_force_plan(net, "vertcon")
        _, re = brute_force_plan(net, "edgecon")
        v = rv.max_node_cost.bit_length() - 1
        e = re.max_edge_cost.bit_length() - 1
        if not e <= v <= math.ceil(1.5 * e):
            bad.append((sorted(g.edges), v, e))
    ok = not bad
    record(
        5,
        "edgecon* <= vertcon* <= ceil(1.5 edgecon*)",
        ok,
        f"{len(graphs)} graphs on 1..6 vertices, {len(bad)} violations",
    )
    assert ok, bad[:5]


def test_criterion_6_star_case():
    s6 = star(6)
    _, rep = brute_force_plan(s6, "edgecon")
    edgecon = rep.max_edge_cost.bit_length() - 1
    # L(S_6) has the star's edges e0..e5 as vertices, pairwise adjacent
    graph = line_graph(s6)
    g = nx.Graph([tuple(sorted(p)) for p in graph.edges])
    iso = nx.is_isomorphic(g, nx.complete_graph(6))
    bd = decomp.BranchDecomposition(
        K6_BD_ADJ,
        {frozenset((f"e{a}", f"e{b}")): x for (a, b), x in K6_BD_LEAVES.items()},
    )
    bd.validate(graph)
    upper = decomp.branch_width(bd, graph)
    lower = decomp.mixed_vertex_bound(graph)
    ok = edgecon == 6 and iso and upper == lower == 4 == math.ceil(2 * 6 / 3)
    record(
        6,
        "line-graph branch decompositions",
        ok,
        f"star: edgecon*(S_6)={edgecon}, L(S_6)~K_6 {iso}, bw(K_6) in [{lower},{upper}]",
    )
    assert ok


@pytest.mark.xfail(
    strict=True,
    reason="literal width bounds fail on graphs with pendant vertices; "
    "see test_decomp for the corrected statements",
)
def test_criterion_6_random_graphs():
    rng = random.Random(6)
    eq_bad = 0
    bound_bad = 0
    trials = 0
    example = None
    while trials < 100:
        n = rng.randint(2, 6)
        g = nx.gnp_random_graph(n, 0.6, seed=rng.randrange(1 << 30))
        if g.number_of_edges() == 0:
            continue
        net = from_nx(g)
        graph = line_graph(net)
        tree = random_unrooted(net.vertices, rng)
        bd = decomp.embedding_to_branch_decomposition(net, tree)
        width = decomp.branch_width(bd, graph)
        edgecon = unweighted_congestion(net, tree).max_edge_cost
        if width != edgecon:
            eq_bad += 1
        back = decomp.branch_decomposition_to_embedding(net, bd)
        got = unweighted_congestion(net, back).max_edge_cost
        maxdeg = max(dict(g.degree).values())
        if got > width + maxdeg // 3:
            bound_bad += 1
            if example is None:
                example = (sorted(g.edges), width, got, maxdeg)
        trials += 1
    ok = eq_bad == 0 and bound_bad == 0
    record(
        6,
        "line-graph branch decompositions",
        ok,
        f"random: width != edgecon in {eq_bad}/{trials}, "
        f"edgecon > width + maxdeg//3 in {bound_bad}/{trials} (e.g. {example})",
    )
    assert ok


def test_criterion_7_schroedinger():
    bad = []
    count = 0
    for seed in range(120):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 5))
        m = int(rng.integers(1, 7))
        circ = random_circuit(n, m, seed=seed, localities=(1, 2))
        net, tree, report = schroedinger_plan(circ, check=False)
        cmap = congestion(net, tree)
        internal = set(tree.internal_nodes)
        lmax = max(g.locality for g in circ.gates)
        for i, gate in enumerate(circ.gates):
            x = tree.parent[tree.leaf(f"g{i}")]
            if cmap.node_cost[x] != 2 ** (n + gate.locality):
                bad.append((seed, "gate node", i))
        for a, b in tree.edges:
            if a in internal and b in internal and cmap.edge_cost(a, b) != 2**n:
                bad.append((seed, "spine", (a, b)))
        # reads of every input, the final <y| contraction and the output write
        y_node = tree.parent[tree.leaf("y")]
        io = sum(cmap.node_cost[x] for x in tree.leaves)
        io += cmap.node_cost[y_node] + cmap.node_cost[tree.root]
        if report.sequential_time > m * 2 ** (n + lmax) + io:
            bad.append((seed, "time bound"))
        value, _ = execute(net, tree)
        if abs(value - statevector_amplitude(circ)) > 1e-9:
            bad.append((seed, "amplitude"))
        count += 1
    ok = not bad
    record(7, "Schroedinger linear plan congestions", ok, f"{count} circuits, {len(bad)} violations")
    assert ok, bad[:5]


def test_criterion_8_slicing():
    rng = random.Random(8)
    nrng = np.random.default_rng(8)
    worst = 0.0
    count = 0
    while count < 100:
        net = absorb_open_legs(random_small_network(nrng, 5, 3, p=0.7, open_legs=True))
        env = net.environment
        plain = [e.id for e in net.edges if env not in e.endpoints]
        if not plain or len(net.tensor_vertices) < 2:
            continue
        cut = rng.sample(plain, rng.randint(1, min(3, len(plain))))
        plan = make_slice_plan(net, cut)
        inner = random_rooted(plan.reduced, rng)
        sliced = execute_sliced(net, plan, inner)
        whole, _ = execute(net, random_rooted(net, rng))
        worst = max(worst, rel_err(sliced, whole))
        count += 1

    circ = random_circuit(3, 2, seed=88, localities=(2,))
    fnet = feynman_network(circ)
    wires = [e.id for e in fnet.edges]
    plan = make_slice_plan(fnet, wires)
    inner = random_rooted(plan.reduced, rng)
    amp = execute_sliced(fnet, plan, inner)
    full = abs(amp - statevector_amplitude(circ)) < 1e-9
    ok = worst < 1e-9 and plan.multiplier == 16 == 4**2 and not plan.reduced.edges and full
    record(
        8,
        "sliced == unsliced; full wire cut at m=2",
        ok,
        f"{count} instances, max rel err {worst:.2e}; assignments={plan.multiplier}",
    )
    assert ok


def test_criterion_9_round_trips():
    rng = random.Random(9)
    nrng = np.random.default_rng(9)
    bad = 0
    count = 0
    while count < 100:
        net = absorb_open_legs(random_small_network(nrng, 6, 3, p=0.6, open_legs=True))
        if len(net.tensor_vertices) < 2:
            continue
        tree = random_rooted(net, rng)
        for order in orders_from_tree(tree):
            if tree_from_order(net, order) != tree:
                bad += 1
        if net.environment is None:
            u = unroot(tree)
            top = tree.top
            a, b = tree.children(top)
            if root(u, (min(a, b), max(a, b))) != tree:
                bad += 1
            for f in u.edges:
                if unroot(root(u, f)) != u:
                    bad += 1
        else:
            if root_at_vertex(unroot(tree), net.environment) != tree:
                bad += 1
        text = format_tree(tree)
        if format_tree(parse_tree(text, net)) != text:
            bad += 1
        plain = random_small_network(nrng, 5, 3)
        ntext = format_network(plain)
        if format_network(parse_network(ntext)) != ntext:
            bad += 1
        count += 1
    ok = bad == 0
    record(9, "order/tree, root/unroot and file round trips", ok, f"{count} trees, {bad} failures")
    assert ok


def test_criterion_10_handshake():
    rng = random.Random(10)
    nrng = np.random.default_rng(10)
    bad = 0
    count = 0
    while count < 100:
        net = random_small_network(nrng, 6, 3, p=0.6)
        if len(net.vertices) < 3:
            continue
        tree = random_unrooted(net.vertices, rng)
        if count % 2:
            tree = root(tree, rng.choice(tree.edges))
        cmap = congestion(net, tree)
        node_cost, edge_cost = containment_congestion(net, tree)
        if node_cost != cmap.node_cost or edge_cost != cmap.tree_edge_cost:
            bad += 1
        for x in tree.internal_nodes:
            prod = math.prod(cmap.edge_cost(x, y) for y in tree.neighbors(x))
            if cmap.node_cost[x] ** 2 != prod:
                bad += 1
        count += 1
    ok = bad == 0
    record(10, "node_cost^2 == product of incident edge costs", ok, f"{count} trees, {bad} failures")
    assert ok


def test_single_tensor_is_a_read_and_a_write():
    # Companion to criterion 2 at n = 1: the read plus the output write.
    net = absorb_open_legs(make_net("a", [("x", "a", 3)], np.random.default_rng(0)))
    tree = next(all_rooted_trees(net))
    value, measured = execute(net, tree)
    assert measured.sequential_time == cost_report(net, tree).sequential_time == 6
    assert rel_err(value, naive_oracle(net)) < 1e-12
