"""Dense labelled tensors and the pairwise contraction kernel."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class DenseTensor:
    """An n-d complex array whose axes are labelled by edge ids.

    ``axes`` plus ``extents`` is the dope vector; ``data`` is held
    row-major with respect to ``axes``.
    """

    axes: tuple[str, ...]
    data: np.ndarray

    def __post_init__(self):
        axes = tuple(self.axes)
        if len(set(axes)) != len(axes):
            raise ValueError(f"duplicate axis labels: {axes}")
        data = np.asarray(self.data, dtype=np.complex128)
        if data.ndim != len(axes):
            raise ValueError(
                f"tensor has {data.ndim} dimensions but {len(axes)} axis labels"
            )
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "data", data)

    @classmethod
    def from_flat(cls, axes, extents, values) -> "DenseTensor":
        extents = tuple(int(d) for d in extents)
        flat = np.asarray(values, dtype=np.complex128).ravel()
        if flat.size != math.prod(extents):
            raise ValueError(
                f"expected {math.prod(extents)} entries for extents {extents}, "
                f"got {flat.size}"
            )
        return cls(tuple(axes), flat.reshape(extents))

    @property
    def extents(self) -> tuple[int, ...]:
        return tuple(self.data.shape)

    @property
    def size(self) -> int:
        return int(self.data.size)

    @property
    def flat(self) -> np.ndarray:
        return self.data.ravel()

    def extent(self, axis: str) -> int:
        return self.extents[self.axes.index(axis)]

    def transpose(self, axes) -> "DenseTensor":
        axes = tuple(axes)
        perm = [self.axes.index(a) for a in axes]
        return DenseTensor(axes, np.transpose(self.data, perm))

    def select(self, axis: str, index: int) -> "DenseTensor":
        """Fix one axis to ``index``, dropping it."""
        i = self.axes.index(axis)
        return DenseTensor(
            self.axes[:i] + self.axes[i + 1 :], np.take(self.data, index, axis=i)
        )

    def __repr__(self):
        return f"DenseTensor(axes={self.axes}, extents={self.extents})"


def _contract(a: DenseTensor, b: DenseTensor, keep=()):
    """Contract ``a`` with ``b`` as a (batched) matrix multiplication.

    Shared axes listed in ``keep`` survive as batch axes (hyperedges that
    still have endpoints elsewhere); other shared axes are summed.

    Returns ``(tensor, mults, transient)`` where ``mults`` is the exact
    multiply-add count and ``transient`` the number of entries copied by
    non-trivial permutations of the inputs.
    """
    keep = set(keep)
    bset = set(b.axes)
    shared = [ax for ax in a.axes if ax in bset]
    for ax in shared:
        if a.extent(ax) != b.extent(ax):
            raise ValueError(
                f"extent mismatch on shared axis {ax!r}: "
                f"{a.extent(ax)} vs {b.extent(ax)}"
            )
    unknown = keep.difference(shared)
    if unknown:
        raise ValueError(f"cannot keep non-shared axes {sorted(unknown)}")

    batch = [ax for ax in shared if ax in keep]
    summed = [ax for ax in shared if ax not in keep]
    ashared = set(shared)
    free_a = [ax for ax in a.axes if ax not in ashared]
    free_b = [ax for ax in b.axes if ax not in ashared]

    def dims(t, axes):
        return [t.extent(ax) for ax in axes]

    nb = math.prod(dims(a, batch))
    nl = math.prod(dims(a, free_a))
    nm = math.prod(dims(a, summed))
    nr = math.prod(dims(b, free_b))

    transient = 0
    a_order = batch + free_a + summed
    b_order = batch + summed + free_b
    if tuple(a_order) != a.axes:
        transient += a.size
    if tuple(b_order) != b.axes:
        transient += b.size
    am = a.transpose(a_order).data.reshape(nb, nl, nm)
    bm = b.transpose(b_order).data.reshape(nb, nm, nr)
    out = np.matmul(am, bm)

    out_axes = tuple(batch + free_a + free_b)
    out_shape = dims(a, batch) + dims(a, free_a) + dims(b, free_b)
    result = DenseTensor(out_axes, out.reshape(out_shape))
    return result, nb * nl * nm * nr, transient


def contract_pair(a: DenseTensor, b: DenseTensor, keep=()) -> DenseTensor:
    """Contract two tensors over their shared axes.

    The output carries the symmetric difference of the input axes (plus any
    shared axes named in ``keep``), free axes of ``a`` before those of ``b``.
    """
    return _contract(a, b, keep)[0]
