"""Quantum circuits as tensor networks for amplitude ``<x| G_1 ... G_m |y>``.

Qubit ``q`` of a basis state ``x`` is bit ``(x >> (n - 1 - q)) & 1``; a gate
matrix on qubits ``(q1, ..., ql)`` is indexed big-endian in that order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .network import Edge, Network
from .tensor import DenseTensor


@dataclass(frozen=True)
class Gate:
    qubits: tuple[int, ...]
    matrix: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if len(set(self.qubits)) != len(self.qubits) or not self.qubits:
            raise ValueError(f"bad gate qubits {self.qubits}")
        if self.matrix is not None:
            mat = np.asarray(self.matrix, dtype=np.complex128)
            d = 2 ** len(self.qubits)
            if mat.shape != (d, d):
                raise ValueError(f"gate on {len(self.qubits)} qubits needs a {d}x{d} matrix")
            object.__setattr__(self, "matrix", mat)

    @property
    def locality(self) -> int:
        return len(self.qubits)


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...]
    x: int = 0
    y: int = 0

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for i, g in enumerate(self.gates):
            for q in g.qubits:
                if not 0 <= q < self.n_qubits:
                    raise ValueError(
                        f"gate {i} references qubit {q} outside 0..{self.n_qubits - 1}"
                    )
        for s in (self.x, self.y):
            if not 0 <= s < 2**self.n_qubits:
                raise ValueError(f"basis state {s} out of range")

    @property
    def has_matrices(self) -> bool:
        return all(g.matrix is not None for g in self.gates)

    def bit(self, state, q) -> int:
        return (state >> (self.n_qubits - 1 - q)) & 1


def random_unitary(d, rng) -> np.ndarray:
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_circuit(n, m, seed=None, localities=(1, 2), matrices=True) -> Circuit:
    rng = np.random.default_rng(seed)
    gates = []
    for _ in range(m):
        l = int(rng.choice([k for k in localities if k <= n]))
        qubits = tuple(int(q) for q in rng.choice(n, size=l, replace=False))
        mat = random_unitary(2**l, rng) if matrices else None
        gates.append(Gate(qubits, mat))
    x = int(rng.integers(2**n))
    y = int(rng.integers(2**n))
    return Circuit(n, tuple(gates), x, y)


def _basis(circuit, state, axes, qubits):
    data = np.zeros((2,) * len(axes), dtype=np.complex128)
    data[tuple(circuit.bit(state, q) for q in qubits)] = 1.0
    return DenseTensor(tuple(axes), data)


def schroedinger_network(circuit: Circuit) -> Network:
    """One vertex for ``<x|``, one per gate, one for ``|y>``; one wire per
    qubit segment. Tensors are attached when every gate has a matrix."""
    n = circuit.n_qubits
    names = ["x", *(f"g{i}" for i in range(len(circuit.gates))), "y"]
    last = {q: "x" for q in range(n)}
    seg = {q: 0 for q in range(n)}
    edges = []
    x_axes = {}
    gate_axes = {i: ([], []) for i in range(len(circuit.gates))}

    def wire(q, a, b):
        eid = f"q{q}_{seg[q]}"
        seg[q] += 1
        edges.append(Edge(eid, (a, b), 2))
        return eid

    for i, g in enumerate(circuit.gates):
        for q in g.qubits:
            eid = wire(q, last[q], f"g{i}")
            if last[q] == "x":
                x_axes[q] = eid
            else:
                j = int(last[q][1:])
                gate_axes[j][1].append((q, eid))
            gate_axes[i][0].append((q, eid))
            last[q] = f"g{i}"
    y_axes = {}
    for q in range(n):
        eid = wire(q, last[q], "y")
        y_axes[q] = eid
        if last[q] == "x":
            x_axes[q] = eid
        else:
            gate_axes[int(last[q][1:])][1].append((q, eid))

    tensors = None
    if circuit.has_matrices:
        tensors = {
            "x": _basis(circuit, circuit.x, [x_axes[q] for q in range(n)], range(n)),
            "y": _basis(circuit, circuit.y, [y_axes[q] for q in range(n)], range(n)),
        }
        for i, g in enumerate(circuit.gates):
            ins = dict(gate_axes[i][0])
            outs = dict(gate_axes[i][1])
            axes = [ins[q] for q in g.qubits] + [outs[q] for q in g.qubits]
            data = g.matrix.reshape((2,) * (2 * g.locality))
            tensors[f"g{i}"] = DenseTensor(tuple(axes), data)
    return Network(names, edges, tensors)


def feynman_network(circuit: Circuit) -> Network:
    """Path-integral form: ``<x_q|`` absorbed into the first gate on each
    qubit, one output vertex ``y{q}`` per qubit, wires between consecutive
    gates and from the last gate to the output."""
    if not circuit.has_matrices:
        raise ValueError("feynman_network needs gate matrices")
    n = circuit.n_qubits
    gates = circuit.gates
    names = [f"g{i}" for i in range(len(gates))] + [f"y{q}" for q in range(n)]
    edges = []
    prev = {}
    in_axis = {}
    out_axis = {}
    for i, g in enumerate(gates):
        for q in g.qubits:
            if q in prev:
                eid = f"w{len(edges)}"
                edges.append(Edge(eid, (f"g{prev[q]}", f"g{i}"), 2))
                out_axis[(prev[q], q)] = eid
                in_axis[(i, q)] = eid
            prev[q] = i
    y_axis = {}
    for q in range(n):
        if q in prev:
            eid = f"w{len(edges)}"
            edges.append(Edge(eid, (f"g{prev[q]}", f"y{q}"), 2))
            out_axis[(prev[q], q)] = eid
            y_axis[q] = eid

    tensors = {}
    for i, g in enumerate(gates):
        t = g.matrix.reshape((2,) * (2 * g.locality))
        index = []
        axes = []
        for q in g.qubits:
            if (i, q) in in_axis:
                index.append(slice(None))
                axes.append(in_axis[(i, q)])
            else:
                index.append(circuit.bit(circuit.x, q))
        for q in g.qubits:
            index.append(slice(None))
            axes.append(out_axis[(i, q)])
        tensors[f"g{i}"] = DenseTensor(tuple(axes), t[tuple(index)])
    for q in range(n):
        yb = circuit.bit(circuit.y, q)
        if q in y_axis:
            data = np.zeros(2, dtype=np.complex128)
            data[yb] = 1.0
            tensors[f"y{q}"] = DenseTensor((y_axis[q],), data)
        else:
            val = 1.0 if circuit.bit(circuit.x, q) == yb else 0.0
            tensors[f"y{q}"] = DenseTensor((), np.array(val, dtype=np.complex128))
    return Network(names, edges, tensors)


def statevector_amplitude(circuit: Circuit) -> complex:
    """``<x| G_1 ... G_m |y>`` by applying gates to a dense state vector."""
    n = circuit.n_qubits
    psi = np.zeros(2**n, dtype=np.complex128)
    psi[circuit.y] = 1.0
    for g in reversed(circuit.gates):
        l = g.locality
        state = psi.reshape((2,) * n)
        rest = [q for q in range(n) if q not in g.qubits]
        state = np.transpose(state, list(g.qubits) + rest).reshape(2**l, -1)
        state = (g.matrix @ state).reshape((2,) * n)
        inv = np.argsort(list(g.qubits) + rest)
        psi = np.transpose(state, inv).reshape(-1)
    return complex(psi[circuit.x])
