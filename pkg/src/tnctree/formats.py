"""Text formats for networks and contraction trees.

Network file::

    tn v1
    v a
    v b
    e 2 a b          # edge ids default to e0, e1, ... in file order
    e 3 b = out      # one endpoint: an open leg; "= id" names the edge
    t a inline 1 0.5-1j
    t b file b.bin   # little-endian: u64 rank, u64 extents, complex128 data

Tensor axes follow the vertex's incident edges in file order. Tree files
hold one canonical tree string, e.g. ``((a,b),(c,d))`` or
``root((a,b),(c,d))``.
"""

from __future__ import annotations

import os
import struct

import numpy as np

from .network import Edge, Network
from .tensor import DenseTensor
from .tree import ContractionTree

HEADER = "tn v1"


class FormatError(ValueError):
    """Malformed input file."""


# ---------------------------------------------------------------------- #
# binary tensor sidecars
# ---------------------------------------------------------------------- #


def write_tensor_file(path, t: DenseTensor):
    with open(path, "wb") as fh:
        fh.write(struct.pack(f"<{1 + len(t.extents)}Q", len(t.extents), *t.extents))
        fh.write(np.ascontiguousarray(t.data, dtype="<c16").tobytes())


def read_tensor_file(path):
    """``(extents, flat_values)`` of a sidecar tensor file."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < 8:
        raise FormatError(f"{path}: truncated header")
    (rank,) = struct.unpack_from("<Q", raw)
    head = 8 * (1 + rank)
    if len(raw) < head:
        raise FormatError(f"{path}: truncated header")
    extents = struct.unpack_from(f"<{rank}Q", raw, 8)
    size = int(np.prod(extents, dtype=np.int64)) if rank else 1
    if len(raw) - head != 16 * size:
        raise FormatError(f"{path}: expected {size} complex128 values")
    return tuple(extents), np.frombuffer(raw, dtype="<c16", offset=head).astype(np.complex128)


# ---------------------------------------------------------------------- #
# networks
# ---------------------------------------------------------------------- #


def _number(tok):
    try:
        return complex(tok)
    except ValueError:
        raise FormatError(f"bad complex number {tok!r}") from None


def _fmt(z) -> str:
    z = complex(z)
    if z.imag == 0:
        return repr(z.real)
    return repr(z).strip("()")


def parse_network(text: str, base_dir=".") -> Network:
    """Parse the network text format; errors name the offending line."""
    lines = text.splitlines()
    body = [
        (i, ln.split("#", 1)[0].split())
        for i, ln in enumerate(lines, 1)
    ]
    body = [(i, tok) for i, tok in body if tok]
    if not body or " ".join(body[0][1]) != HEADER:
        raise FormatError(f"line 1: expected header {HEADER!r}")
    vertices, edges, tdefs = [], [], {}
    for lineno, tok in body[1:]:
        kind = tok[0]
        try:
            if kind == "v":
                if len(tok) != 2:
                    raise FormatError("expected 'v <id>'")
                vertices.append(tok[1])
            elif kind == "e":
                if len(tok) < 3:
                    raise FormatError("expected 'e <dim> <vertex...> [= <edge-id>]'")
                rest = tok[2:]
                eid = f"e{len(edges)}"
                if "=" in rest:
                    k = rest.index("=")
                    if k != len(rest) - 2:
                        raise FormatError("'=' must be followed by exactly one edge id")
                    eid = rest[-1]
                    rest = rest[:k]
                try:
                    dim = int(tok[1])
                except ValueError:
                    raise FormatError(f"bad dimension {tok[1]!r}") from None
                if not rest:
                    raise FormatError("edge needs at least one vertex")
                edges.append(Edge(eid, tuple(rest), dim))
            elif kind == "t":
                if len(tok) < 3 or tok[2] not in ("inline", "file"):
                    raise FormatError("expected 't <vertex> inline|file ...'")
                if tok[1] in tdefs:
                    raise FormatError(f"second tensor for {tok[1]!r}")
                if tok[2] == "file":
                    if len(tok) != 4:
                        raise FormatError("expected 't <vertex> file <path>'")
                    tdefs[tok[1]] = ("file", os.path.join(base_dir, tok[3]), lineno)
                else:
                    tdefs[tok[1]] = ("inline", [_number(x) for x in tok[3:]], lineno)
            else:
                raise FormatError(f"unknown directive {kind!r}")
        except (FormatError, ValueError) as exc:
            raise FormatError(f"line {lineno}: {exc}") from None

    try:
        net = Network(vertices, edges)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    if not tdefs:
        return net
    missing = [v for v in vertices if v not in tdefs]
    if missing:
        raise FormatError(f"vertex {missing[0]!r} has no tensor; give all or none")
    tensors = {}
    for v, (mode, src, lineno) in tdefs.items():
        if v not in net._index:
            raise FormatError(f"line {lineno}: tensor for unknown vertex {v!r}")
        axes = [e.id for e in net.incident(v)]
        extents = [e.dim for e in net.incident(v)]
        if mode == "file":
            got, values = read_tensor_file(src)
            if list(got) != extents:
                raise FormatError(
                    f"line {lineno}: file extents {list(got)} != bond dimensions {extents}"
                )
        else:
            values = src
        try:
            tensors[v] = DenseTensor.from_flat(axes, extents, values)
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
    return net.with_tensors(tensors)


def read_network(path) -> Network:
    with open(path) as fh:
        return parse_network(fh.read(), os.path.dirname(os.path.abspath(path)))


def format_network(net: Network, tensor_files=None) -> str:
    """Text form of ``net``; ``tensor_files`` maps vertices to sidecar paths
    written by the caller instead of inline values."""
    if net.environment is not None:
        raise ValueError("write the network before absorbing its open legs")
    tensor_files = tensor_files or {}
    out = [HEADER]
    out.extend(f"v {v}" for v in net.vertices)
    for k, e in enumerate(net.edges):
        line = f"e {e.dim} {' '.join(e.endpoints)}"
        if e.id != f"e{k}":
            line += f" = {e.id}"
        out.append(line)
    if net.tensors is not None:
        for v in net.vertices:
            if v in tensor_files:
                out.append(f"t {v} file {tensor_files[v]}")
                continue
            t = net.tensors[v].transpose([e.id for e in net.incident(v)])
            out.append(" ".join([f"t {v} inline", *map(_fmt, t.flat)]))
    return "\n".join(out) + "\n"


def write_network(path, net: Network, sidecar=False):
    """Write ``net``; with ``sidecar`` each tensor goes to ``<stem>.<v>.bin``."""
    files = {}
    if sidecar and net.tensors is not None:
        stem = os.path.splitext(os.path.basename(path))[0]
        folder = os.path.dirname(os.path.abspath(path))
        for v in net.vertices:
            name = f"{stem}.{v}.bin"
            t = net.tensors[v].transpose([e.id for e in net.incident(v)])
            write_tensor_file(os.path.join(folder, name), t)
            files[v] = name
    with open(path, "w") as fh:
        fh.write(format_network(net, files))


# ---------------------------------------------------------------------- #
# trees
# ---------------------------------------------------------------------- #


def _tokens(text):
    out = []
    word = []
    for ch in text:
        if ch in "(),=":
            if word:
                out.append("".join(word))
                word = []
            out.append(ch)
        elif ch.isspace():
            if word:
                out.append("".join(word))
                word = []
        else:
            word.append(ch)
    if word:
        out.append("".join(word))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, want=None):
        tok = self.peek()
        if tok is None:
            raise FormatError("unexpected end of tree")
        if want is not None and tok != want:
            raise FormatError(f"expected {want!r}, found {tok!r}")
        self.i += 1
        return tok

    def node(self):
        if self.peek() == "(":
            return self.group()
        tok = self.take()
        if tok in "(),=":
            raise FormatError(f"unexpected {tok!r}")
        return tok

    def group(self):
        self.take("(")
        items = [self.node()]
        while self.peek() == ",":
            self.take(",")
            items.append(self.node())
        self.take(")")
        return items


def parse_tree(text: str, net: Network | None = None) -> ContractionTree:
    """Parse a tree string; leaf node ids follow ``net``'s vertex order."""
    p = _Parser(text.strip())
    rooted = False
    env = None
    if p.peek() == "root" and len(p.toks) > 1 and p.toks[1] in ("(", "="):
        p.take()
        rooted = True
        if p.peek() == "=":
            p.take("=")
            env = p.take()
        body = p.group()
    else:
        body = p.node()
    if p.peek() is not None:
        raise FormatError(f"trailing text at {p.peek()!r}")

    leaves = []

    def collect(x):
        if isinstance(x, str):
            leaves.append(x)
        else:
            for y in x:
                collect(y)

    collect(body)
    if len(set(leaves)) != len(leaves):
        dup = next(v for v in leaves if leaves.count(v) > 1)
        raise FormatError(f"leaf {dup!r} appears twice")
    if net is not None:
        for v in leaves:
            if v not in net.vertices:
                raise FormatError(f"leaf mismatch: vertex {v!r} appears only in the tree")
        ids = {v: net.index(v) for v in leaves}
        nxt = [len(net.vertices)]
    else:
        ids = {v: i for i, v in enumerate(leaves)}
        nxt = [len(leaves)]
    adj = {ids[v]: [] for v in leaves}

    def fresh():
        x = nxt[0]
        nxt[0] += 1
        adj[x] = []
        return x

    def link(a, b):
        adj[a].append(b)
        adj[b].append(a)

    def build(x):
        if isinstance(x, str):
            return ids[x]
        if len(x) != 2:
            raise FormatError(f"inner groups must have two members, found {len(x)}")
        a, b = build(x[0]), build(x[1])
        c = fresh()
        link(c, a)
        link(c, b)
        return c

    leaf_map = dict(ids)
    if rooted:
        if len(body) == 1:
            top = build(body[0])
        elif len(body) == 2:
            top = build(body)
        else:
            raise FormatError("root(...) takes one or two subtrees")
        r = fresh()
        link(r, top)
        if env is not None:
            leaf_map[env] = r
        tree = ContractionTree(adj, leaf_map, r)
    elif isinstance(body, str):
        tree = ContractionTree(adj, leaf_map)
    elif len(body) == 2:
        link(build(body[0]), build(body[1]))
        tree = ContractionTree(adj, leaf_map)
    elif len(body) == 3:
        c = fresh()
        for y in body:
            link(c, build(y))
        tree = ContractionTree(adj, leaf_map)
    else:
        raise FormatError("an unrooted tree has two or three top-level members")
    if net is not None:
        try:
            tree.check(net)
        except ValueError as exc:
            raise FormatError(str(exc)) from None
    return tree


def format_tree(tree: ContractionTree) -> str:
    return tree.canonical() + "\n"


def read_tree(path, net=None) -> ContractionTree:
    with open(path) as fh:
        return parse_tree(fh.read(), net)


def write_tree(path, tree: ContractionTree):
    with open(path, "w") as fh:
        fh.write(format_tree(tree))
