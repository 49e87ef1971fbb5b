"""Tensor networks as edge-weighted hypergraphs.

Bond dimensions are stored as integers; the weight of an edge is the log2
of its dimension. Networks are immutable: every operation returns a new one.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from types import MappingProxyType

from .tensor import DenseTensor

_RESERVED = set("(),=# \t\n")


def _check_id(kind, name):
    if not isinstance(name, str) or not name or _RESERVED.intersection(name):
        raise ValueError(f"invalid {kind} id {name!r}")


@dataclass(frozen=True)
class Edge:
    """A (hyper)edge. A single endpoint marks an open leg."""

    id: str
    endpoints: tuple[str, ...]
    dim: int
    provenance: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "endpoints", tuple(self.endpoints))
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"edge {self.id!r}: bond dimension must be >= 1")
        object.__setattr__(self, "dim", int(self.dim))
        if not self.endpoints:
            raise ValueError(f"edge {self.id!r} has no endpoints")
        if len(set(self.endpoints)) != len(self.endpoints):
            raise ValueError(f"edge {self.id!r} has repeated endpoints (self-loop)")

    @property
    def weight(self) -> float:
        return math.log2(self.dim)

    @property
    def is_open(self) -> bool:
        return len(self.endpoints) == 1

    @property
    def is_hyper(self) -> bool:
        return len(self.endpoints) > 2


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph; edges are 2-element frozensets."""

    vertices: tuple
    edges: frozenset

    def neighbors(self, v):
        return {u for e in self.edges if v in e for u in e if u != v}

    def degree(self, v) -> int:
        return sum(1 for e in self.edges if v in e)

    @property
    def max_degree(self) -> int:
        return max((self.degree(v) for v in self.vertices), default=0)


class Network:
    """An edge-weighted hypergraph with optional tensor payloads.

    Parameters
    ----------
    vertices : iterable of str
        Vertex ids, in canonical order.
    edges : iterable of Edge
    tensors : mapping of vertex id to DenseTensor, optional
        Absent in plan-only mode. The environment vertex never has one.
    environment : str, optional
        Vertex standing in for the open legs of the original network.
    """

    __slots__ = (
        "vertices",
        "edges",
        "tensors",
        "environment",
        "_index",
        "_edge_index",
        "_incident",
    )

    def __init__(self, vertices, edges, tensors=None, environment=None):
        vertices = tuple(vertices)
        edges = tuple(edges)
        for v in vertices:
            _check_id("vertex", v)
        if len(set(vertices)) != len(vertices):
            raise ValueError("duplicate vertex ids")
        index = {v: i for i, v in enumerate(vertices)}
        edge_index = {}
        incident = defaultdict(list)
        for e in edges:
            _check_id("edge", e.id)
            if e.id in edge_index:
                raise ValueError(f"duplicate edge id {e.id!r}")
            for v in e.endpoints:
                if v not in index:
                    raise ValueError(f"edge {e.id!r} references unknown vertex {v!r}")
                incident[v].append(e)
            edge_index[e.id] = e
        if environment is not None and environment not in index:
            raise ValueError(f"environment {environment!r} is not a vertex")

        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "environment", environment)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_edge_index", edge_index)
        object.__setattr__(
            self, "_incident", {v: tuple(incident[v]) for v in vertices}
        )

        if tensors is not None:
            tensors = dict(tensors)
            for v in vertices:
                if v == environment:
                    if v in tensors:
                        raise ValueError("the environment vertex carries no tensor")
                    continue
                if v not in tensors:
                    raise ValueError(f"missing tensor for vertex {v!r}")
                self._check_tensor(v, tensors[v])
            extra = set(tensors).difference(index)
            if extra:
                raise ValueError(f"tensors for unknown vertices {sorted(extra)}")
            tensors = MappingProxyType(tensors)
        object.__setattr__(self, "tensors", tensors)

    def __setattr__(self, name, value):
        raise AttributeError("Network is immutable")

    def _check_tensor(self, v, t):
        if not isinstance(t, DenseTensor):
            raise TypeError(f"tensor of {v!r} must be a DenseTensor")
        want = {e.id: e.dim for e in self._incident[v]}
        if set(t.axes) != set(want):
            raise ValueError(
                f"tensor of {v!r} has axes {sorted(t.axes)}, "
                f"incident edges are {sorted(want)}"
            )
        for ax, d in zip(t.axes, t.extents):
            if want[ax] != d:
                raise ValueError(
                    f"tensor of {v!r}: axis {ax!r} has extent {d}, bond dimension {want[ax]}"
                )

    # ------------------------------------------------------------------ #

    def __repr__(self):
        return (
            f"Network(n={len(self.vertices)}, m={len(self.edges)}, "
            f"tensors={self.tensors is not None}, environment={self.environment!r})"
        )

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.vertices == other.vertices
            and self.edges == other.edges
            and self.environment == other.environment
        )

    def __hash__(self):
        return hash((self.vertices, self.edges, self.environment))

    def index(self, v) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise KeyError(f"unknown vertex {v!r}") from None

    def edge(self, eid) -> Edge:
        try:
            return self._edge_index[eid]
        except KeyError:
            raise KeyError(f"unknown edge {eid!r}") from None

    def incident(self, v) -> tuple[Edge, ...]:
        self.index(v)
        return self._incident[v]

    def size(self, v) -> int:
        """Exact number of entries of the tensor at ``v``."""
        return math.prod(e.dim for e in self.incident(v))

    @property
    def open_legs(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.is_open)

    @property
    def has_hyperedges(self) -> bool:
        return any(e.is_hyper for e in self.edges)

    @property
    def tensor_vertices(self) -> tuple[str, ...]:
        """Vertices carrying an actual tensor (all but the environment)."""
        return tuple(v for v in self.vertices if v != self.environment)

    def with_tensors(self, tensors) -> "Network":
        return Network(self.vertices, self.edges, tensors, self.environment)

    def without_tensors(self) -> "Network":
        return Network(self.vertices, self.edges, None, self.environment)


def weighted_degree(net: Network, v) -> float:
    """Sum of the weights of the edges incident to ``v``."""
    return sum(e.weight for e in net.incident(v))


def _fresh(name, taken):
    if name not in taken:
        return name
    for i in itertools.count(1):
        cand = f"{name}_{i}"
        if cand not in taken:
            return cand


def contract_symbolic(net: Network, u, v) -> Network:
    """Merge ``u`` and ``v`` into one vertex at the graph level.

    Edges lying entirely inside ``{u, v}`` disappear. Edges from the merged
    vertex that end up with identical endpoint sets are fused into a single
    edge whose dimension is the product of theirs; the fused edge gets a new
    id and records the ids it came from. Tensors are dropped.
    """
    if u == v:
        raise ValueError("cannot contract a vertex with itself")
    net.index(u)
    net.index(v)
    merged = _fresh(f"{u}+{v}", set(net.vertices))
    vertices = [merged if x == u else x for x in net.vertices if x != v]

    groups = {}
    kept = []
    for e in net.edges:
        if u not in e.endpoints and v not in e.endpoints:
            kept.append(e)
            continue
        ends = []
        for x in e.endpoints:
            x = merged if x in (u, v) else x
            if x not in ends:
                ends.append(x)
        if len(ends) < 2 and len(e.endpoints) >= 2:
            continue
        key = frozenset(ends)
        if key in groups:
            groups[key].append((e, tuple(ends)))
        else:
            groups[key] = [(e, tuple(ends))]
            kept.append(key)

    taken = {e.id for e in net.edges}
    edges = []
    for item in kept:
        if isinstance(item, Edge):
            edges.append(item)
            continue
        members = groups[item]
        if len(members) == 1:
            e, ends = members[0]
            edges.append(Edge(e.id, ends, e.dim, e.provenance))
            continue
        prov = tuple(p for e, _ in members for p in (e.provenance or (e.id,)))
        eid = _fresh("|".join(e.id for e, _ in members), taken)
        taken.add(eid)
        edges.append(
            Edge(eid, members[0][1], math.prod(e.dim for e, _ in members), prov)
        )

    env = net.environment
    if env in (u, v):
        env = merged
    return Network(vertices, edges, None, env)


def line_graph(net: Network) -> SimpleGraph:
    """One vertex per edge of ``net``; adjacent iff they share an endpoint."""
    verts = tuple(e.id for e in net.edges)
    pairs = set()
    for v in net.vertices:
        inc = [e.id for e in net.incident(v)]
        for a, b in itertools.combinations(inc, 2):
            pairs.add(frozenset((a, b)))
    return SimpleGraph(verts, frozenset(pairs))


def absorb_open_legs(net: Network) -> Network:
    """Wire every open leg to a single new environment vertex."""
    legs = net.open_legs
    if not legs:
        return net
    env = _fresh("env", set(net.vertices))
    edges = [
        Edge(e.id, e.endpoints + (env,), e.dim, e.provenance) if e.is_open else e
        for e in net.edges
    ]
    tensors = None if net.tensors is None else dict(net.tensors)
    return Network(net.vertices + (env,), edges, tensors, env)
