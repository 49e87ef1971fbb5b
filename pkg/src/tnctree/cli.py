"""Command-line front end: ``tnctree <command> ...``.

Exit status is 0 on success, 2 on bad input and 3 when an exhaustive
method's size cap is exceeded.
"""

from __future__ import annotations

import argparse
import json
import shutil
import sys

import numpy as np

from . import decomp
from .circuits import random_circuit, statevector_amplitude
from .cost import cost_report, schroedinger_plan
from .executor import execute, execute_parallel, execute_sliced, naive_oracle
from .formats import FormatError, format_network, format_tree, read_network, read_tree
from .generators import KINDS, random_network
from .network import absorb_open_legs, line_graph
from .planner import (
    OBJECTIVES,
    CapExceeded,
    brute_force_plan,
    greedy_plan,
    linear_plan,
    make_slice_plan,
)
from .tensor import DenseTensor
from .tree import (
    root_at_vertex,
    rootings,
    unroot,
    unweighted_congestion,
)

EXIT_INPUT = 2
EXIT_CAP = 3


def _emit(text, path=None):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(args):
    return absorb_open_legs(read_network(args.network))


def _rooted(net, tree):
    """Rooted version of ``tree``: bound to the environment if there is one,
    else split at the edge giving the least sequential time."""
    if tree.is_rooted:
        return tree
    if net.environment is not None:
        return root_at_vertex(tree, net.environment)
    best = None
    for t in rootings(tree):
        k = cost_report(net, t).sequential_time
        if best is None or k < best[0]:
            best = (k, t)
    return best[1]


def _parse_order(tree, text):
    steps = [s for s in text.split(";") if s.strip()]
    by_set = {tree.below[x]: x for x in tree.internal_nodes}
    nodes = []
    for i, s in enumerate(steps):
        key = frozenset(v.strip() for v in s.split(","))
        if key not in by_set:
            raise ValueError(f"order step {i}: {sorted(key)} is not a contraction of the tree")
        nodes.append(by_set[key])
    return nodes


def _report_text(report, as_json, extra=None):
    if as_json:
        d = json.loads(report.to_json())
        d.update(extra or {})
        return json.dumps(d, indent=2, sort_keys=True) + "\n"
    head = "".join(f"{k}={v}\n" for k, v in (extra or {}).items())
    return head + report.to_text()


def cmd_plan(args):
    net = _load(args)
    if args.method == "brute":
        tree, report = brute_force_plan(net, args.objective, cap=args.cap)
    elif args.method == "greedy":
        tree, report = greedy_plan(net, args.objective, seed=args.seed)
    else:
        tree, report = linear_plan(net, args.objective)
    if args.output:
        _emit(format_tree(tree), args.output)
    _emit(_report_text(report, args.json, {"tree": tree.canonical()}))
    return 0


def cmd_cost(args):
    net = _load(args)
    tree = _rooted(net, read_tree(args.tree, net))
    order = _parse_order(tree, args.order) if args.order else None
    report = cost_report(net, tree, order, optimize_order=args.optimize_order)
    _emit(_report_text(report, args.json, {"tree": tree.canonical()}))
    return 0


def _bound_line(net, bd_width, tree):
    maxdeg = max((len(net.incident(v)) for v in net.vertices), default=0)
    got = unweighted_congestion(net, tree).max_edge_cost if tree.edges else 0
    return got, bd_width + maxdeg // 3, maxdeg


def cmd_convert(args):
    net = _load(args)
    src, dst = args.src, args.dst
    labels = decomp.line_graph_labels(net)
    graph = line_graph(net)
    with open(args.input) as fh:
        text = fh.read()
    if src == dst:
        # validate, then copy unchanged
        if src == "tree":
            read_tree(args.input, net)
        elif src == "td":
            decomp.read_td(text, labels).validate(graph)
        else:
            decomp.read_bd(text, labels).validate(graph)
        if args.output:
            shutil.copyfile(args.input, args.output)
        else:
            sys.stdout.write(text)
        return 0
    if src == "tree":
        tree = read_tree(args.input, net)
        if tree.is_rooted:
            tree = unroot(tree)
        if dst == "bd":
            bd = decomp.embedding_to_branch_decomposition(net, tree)
            width = decomp.branch_width(bd, graph)
            edgecon = unweighted_congestion(net, tree).max_edge_cost if tree.edges else 0
            _emit(decomp.write_bd(bd, labels), args.output)
            print(f"width={width} edgecon={edgecon}", file=sys.stderr)
        else:
            td, width = decomp.validate_embedding_as_tree_decomposition(net, tree)
            _emit(decomp.write_td(td, labels), args.output)
            print(f"width={width} vertcon={width + 1}", file=sys.stderr)
        return 0
    if src == "bd" and dst == "tree":
        bd = decomp.read_bd(text, labels)
        width = decomp.branch_width(bd, graph)
        tree = decomp.branch_decomposition_to_embedding(net, bd)
        got, bound, maxdeg = _bound_line(net, width, tree)
        if got > max(bound, maxdeg):
            raise AssertionError(f"edge congestion {got} above bound {max(bound, maxdeg)}")
        _emit(format_tree(tree), args.output)
        print(f"width={width} edgecon={got} bound={bound} maxdeg={maxdeg}", file=sys.stderr)
        return 0
    if src == "td" and dst == "tree":
        td = decomp.read_td(text, labels)
        tw = decomp.tree_width(td, graph)
        tree = decomp.import_tree_decomposition(td, net)
        c = unweighted_congestion(net, tree)
        _emit(format_tree(tree), args.output)
        print(
            f"treewidth={tw} vertcon={c.max_node_cost} edgecon={c.max_edge_cost}",
            file=sys.stderr,
        )
        return 0
    if src == "td" and dst == "bd":
        td = decomp.read_td(text, labels)
        bd = decomp.tree_to_branch_decomposition(td, graph)
        _emit(decomp.write_bd(bd, labels), args.output)
        print(f"width={decomp.branch_width(bd, graph)}", file=sys.stderr)
        return 0
    raise ValueError(f"unsupported conversion {src} -> {dst}")


def _value_lines(value):
    if isinstance(value, DenseTensor):
        vals = " ".join(repr(complex(z)).strip("()") for z in value.flat)
        return f"value_axes={','.join(value.axes)}\nvalue={vals}\n"
    return f"value={repr(complex(value)).strip('()')}\n"


def _rel_error(a, b):
    a = a.data if isinstance(a, DenseTensor) else np.asarray(a)
    b = b.data if isinstance(b, DenseTensor) else np.asarray(b)
    scale = float(np.max(np.abs(b))) if np.size(b) else 0.0
    diff = float(np.max(np.abs(a - b))) if np.size(b) else 0.0
    return diff / scale if scale > 0 else diff


def cmd_contract(args):
    net = _load(args)
    if net.tensors is None:
        raise ValueError("network file has no tensors")
    tree = _rooted(net, read_tree(args.tree, net))
    extra = {}
    if args.sliced:
        plan = make_slice_plan(net, [e for e in args.sliced.split(",") if e])
        value = execute_sliced(net, plan, tree)
        report = cost_report(plan.reduced, tree)
        extra["assignments"] = plan.multiplier
    elif args.parallel:
        value, makespan = execute_parallel(net, tree, args.parallel)
        _, report = execute(net, tree)
        extra["makespan"] = makespan
    else:
        value, report = execute(net, tree)
    out = _value_lines(value)
    if args.oracle:
        extra["oracle_relative_error"] = _rel_error(value, naive_oracle(net))
    out += _report_text(report, False, extra)
    _emit(out)
    return 0


def cmd_random(args):
    net = random_network(args.kind, args.n, args.dim, args.seed)
    _emit(format_network(net), args.output)
    return 0


def cmd_schroedinger(args):
    circ = random_circuit(args.qubits, args.gates, args.seed)
    if args.x is not None or args.y is not None:
        from dataclasses import replace

        circ = replace(
            circ,
            x=circ.x if args.x is None else args.x,
            y=circ.y if args.y is None else args.y,
        )
    net, tree, report = schroedinger_plan(circ)
    value, _ = execute(net, tree)
    extra = {
        "x": circ.x,
        "y": circ.y,
        "statevector_amplitude": repr(statevector_amplitude(circ)).strip("()"),
        "tree": tree.canonical(),
    }
    _emit(_value_lines(value) + _report_text(report, False, extra))
    return 0


def cmd_validate(args):
    net = read_network(args.network)
    print(
        f"network ok: {len(net.vertices)} vertices, {len(net.edges)} edges, "
        f"{len(net.open_legs)} open legs, tensors={'yes' if net.tensors else 'no'}"
    )
    if args.tree:
        tree = read_tree(args.tree, absorb_open_legs(net))
        print(f"tree ok: {tree.kind}, {len(tree.nodes)} nodes")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="tnctree", description="Plan, cost and run tensor network contractions."
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="find a contraction tree")
    p.add_argument("network")
    p.add_argument("--objective", choices=OBJECTIVES, default="total_time")
    p.add_argument("--method", choices=("brute", "greedy", "linear"), default="greedy")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=None, help="brute-force size cap")
    p.add_argument("-o", "--output", help="write the tree here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("cost", help="cost report of a tree")
    p.add_argument("network")
    p.add_argument("tree")
    p.add_argument("--order", help="steps as vertex sets, e.g. 'a,b;c,d;a,b,c,d'")
    p.add_argument("--optimize-order", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("convert", help="convert between trees and decompositions")
    p.add_argument("--from", dest="src", choices=("tree", "td", "bd"), required=True)
    p.add_argument("--to", dest="dst", choices=("tree", "td", "bd"), required=True)
    p.add_argument("network")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("contract", help="contract numerically")
    p.add_argument("network")
    p.add_argument("tree")
    p.add_argument("--sliced", help="comma-separated edge ids to slice")
    p.add_argument("--parallel", type=int, help="worker count")
    p.add_argument("--oracle", action="store_true")
    p.set_defaults(func=cmd_contract)

    p = sub.add_parser("random", help="random network file")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("schroedinger", help="random circuit amplitude, linear plan")
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--gates", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--x", type=int)
    p.add_argument("--y", type=int)
    p.set_defaults(func=cmd_schroedinger)

    p = sub.add_parser("validate", help="parse and check files")
    p.add_argument("network")
    p.add_argument("tree", nargs="?")
    p.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (FormatError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
