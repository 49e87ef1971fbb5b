import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_rooted_trees, make_net, star
from tnctree.cost import cost_report, min_peak_memory_order
from tnctree.generators import random_network, random_small_network
from tnctree.network import absorb_open_legs
from tnctree.planner import (
    OBJECTIVES,
    CapExceeded,
    Objective,
    brute_force_plan,
    greedy_plan,
    linear_optimum,
    linear_plan,
    make_slice_plan,
    pareto_plans,
    select_slice_edges,
    sliced_costs,
)
from tnctree.tree import linear_tree, tree_from_order

seeds = st.integers(0, 2**32 - 1)


def objective_value(net, tree, kind):
    r = cost_report(net, tree, optimize_order=kind == "peak_memory")
    return Objective(kind).key(r)[0]


def oracle_best(net, kind):
    return min(objective_value(net, t, kind) for t in all_rooted_trees(net))


def test_unknown_objective():
    with pytest.raises(ValueError, match="unknown objective"):
        Objective("speed")


def test_p4_optima(path4):
    _, rv = brute_force_plan(path4, "vertcon")
    _, re = brute_force_plan(path4, "edgecon")
    assert rv.vertcon == 2.0 and re.edgecon == 2.0


def test_star6_edgecon():
    _, r = brute_force_plan(star(6), "edgecon")
    assert r.edgecon == 6.0


def test_triangle_total_time(triangle):
    tree, r = brute_force_plan(triangle, "total_time")
    assert tree.canonical() == "root((a,c),b)"
    assert r.sequential_time == 129 == oracle_best(triangle, "total_time")


def test_cap(triangle):
    with pytest.raises(CapExceeded):
        brute_force_plan(triangle, "total_time", cap=2)
    net = random_network("ring", 8, tensors=False)
    with pytest.raises(CapExceeded):
        brute_force_plan(net, "peak_memory")


def test_single_tensor_plans():
    net = make_net("a", [("x", "a", 3)])
    for kind in OBJECTIVES:
        tree, r = brute_force_plan(net, kind)
        assert r.sequential_time == 6
    assert linear_plan(net)[1].sequential_time == 6
    assert greedy_plan(net)[1].sequential_time == 6


@pytest.mark.parametrize("kind", OBJECTIVES)
@settings(max_examples=25, deadline=None)
@given(seed=seeds)
def test_brute_force_is_optimal(kind, seed):
    net = absorb_open_legs(
        random_small_network(np.random.default_rng(seed), 5, 3, hyper=True, open_legs=True)
    ).without_tensors()
    if net.environment is not None and len(net.tensor_vertices) < 1:
        return
    tree, r = brute_force_plan(net, kind)
    assert Objective(kind).key(r)[0] == oracle_best(net, kind)
    tree.check(net)


def test_greedy_triangle_first_step(triangle):
    tree, _ = greedy_plan(triangle)
    first = tree.below[min(tree.internal_nodes, key=lambda x: len(tree.below[x]))]
    # every pair costs 64; (a, c) leaves the smallest result, legs 2 and 4
    assert first == frozenset("ac")


def test_greedy_is_seeded(triangle):
    net = random_network("grid", 3, tensors=False)
    assert greedy_plan(net, seed=5)[0] == greedy_plan(net, seed=5)[0]


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_greedy_never_beats_optimum(seed):
    rng = np.random.default_rng(seed)
    net = random_small_network(rng, 8, 3, p=0.5).without_tensors()
    if len(net.vertices) < 2:
        return
    gtree, g = greedy_plan(net, "total_time", seed=seed)
    gtree.check(net)
    _, b = brute_force_plan(net, "total_time")
    assert g.sequential_time >= b.sequential_time


def test_linear_edgecon_examples():
    p3 = make_net("abc", [("ab", "ab", 2), ("bc", "bc", 8)])
    _, r = linear_plan(p3, "edgecon")
    # cut after {a, b} carries 8; b's leaf edge carries 16
    assert r.max_edge_cost == 16
    c4 = random_network("ring", 4, tensors=False)
    _, r = linear_plan(c4, "edgecon")
    assert r.edgecon == 2.0


@pytest.mark.parametrize("kind", OBJECTIVES)
@settings(max_examples=20, deadline=None)
@given(seed=seeds)
def test_linear_plan_is_best_caterpillar(kind, seed):
    net = absorb_open_legs(
        random_small_network(np.random.default_rng(seed), 5, 3, hyper=True, open_legs=True)
    ).without_tensors()
    verts = net.tensor_vertices
    if len(verts) < 2:
        return
    want = min(objective_value(net, linear_tree(net, p), kind) for p in itertools.permutations(verts))
    tree, r = linear_plan(net, kind)
    assert r.exact_plan
    assert Objective(kind).key(r)[0] == want
    if kind != "peak_memory":
        assert linear_optimum(net, kind) == want


def test_linear_plan_greedy_beyond_limit():
    net = random_network("grid", 3, tensors=False)
    tree, r = linear_plan(net, "total_time", exact_limit=4)
    assert not r.exact_plan
    tree.check(net)


def test_pareto_front(triangle):
    front = pareto_plans(triangle)
    times = [t for t, _, _ in front]
    peaks = [m for _, m, _ in front]
    assert times == sorted(times) and peaks == sorted(peaks, reverse=True)
    pts = []
    for tree in all_rooted_trees(triangle):
        r = cost_report(triangle, tree)
        pts.append((r.sequential_time, min_peak_memory_order(triangle, tree)[1]))
    for t, m in pts:
        assert any(ft <= t and fm <= m for ft, fm, _ in front)


# ---------------------------------------------------------------------- #
# slicing
# ---------------------------------------------------------------------- #


def test_slice_triangle(triangle):
    plan = make_slice_plan(triangle, ["ac"])
    assert plan.multiplier == 8 and plan.W == 3.0
    assert [e.id for e in plan.reduced.edges] == ["ab", "bc"]
    inner = tree_from_order(plan.reduced, [("a", "b"), ({"a", "b"}, "c")])
    c = sliced_costs(plan, inner)
    assert c["assignments"] == 8
    assert c["sequential_time"] == 8 * c["slice_time"]
    assert c["peak_memory"] == c["slice_peak_memory"] + 1


def test_slice_errors(triangle):
    with pytest.raises(ValueError, match="twice"):
        make_slice_plan(triangle, ["ab", "ab"])
    with pytest.raises(KeyError):
        make_slice_plan(triangle, ["zz"])
    hyper = make_net("abc", [("h", "abc", 2)])
    with pytest.raises(ValueError, match="hyperedge"):
        make_slice_plan(hyper, ["h"])
    leg = absorb_open_legs(make_net("ab", [("ab", "ab", 2), ("x", "a", 2)]))
    with pytest.raises(ValueError, match="open leg"):
        make_slice_plan(leg, ["x"])


def test_select_slice_edges(path4):
    assert select_slice_edges(path4, 1) == ["bc"]
    assert sorted(select_slice_edges(path4, 3)) == ["ab", "bc", "cd"]
