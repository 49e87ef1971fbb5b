"""Pure-Python versions of the hot kernels.

Behaviour (including enumeration order and tie-breaking) matches the
compiled module ``_kernels`` exactly; ``kernels`` picks one at import.
"""

import math

import numpy as np

OBJ_TOTAL = 0
OBJ_VERTCON = 1
OBJ_EDGECON = 2
OBJ_PARALLEL = 3


def iter_parent_arrays(n):
    """Yield every unrooted binary tree on ``n >= 3`` labelled leaves.

    Trees are parent arrays oriented away from leaf 0: nodes ``0..n-1``
    are leaves and ``n..2n-3`` internal. Leaf ``k`` is inserted into each
    existing edge in turn, the edge named by its lower endpoint: leaves
    ``1..k-1`` first, then internal nodes in creation order. The same list
    object is yielded each time.
    """
    N = 2 * n - 2
    parent = [-1] * N
    parent[1] = parent[2] = n
    parent[n] = 0

    def rec(k):
        if k == n:
            yield parent
            return
        s = n + k - 2
        for c in [*range(1, k), *range(n, s)]:
            p = parent[c]
            parent[s] = p
            parent[c] = s
            parent[k] = s
            yield from rec(k + 1)
            parent[c] = p
        parent[k] = -1
        parent[s] = -1

    yield from rec(3)


def _costs(n, parent, masks, dims):
    N = 2 * n - 2
    children = [[] for _ in range(N)]
    for x in range(1, N):
        children[parent[x]].append(x)
    order = [0]
    for x in order:
        order.extend(children[x])
    sub = [0] * N
    for x in reversed(order):
        if x < n:
            sub[x] = 1 << x
        else:
            a, b = children[x]
            sub[x] = sub[a] | sub[b]
    full = (1 << n) - 1
    pairs = list(zip(masks, dims))

    node = [1] * N
    for x in range(N):
        c = 1
        if x < n:
            bit = 1 << x
            for m, d in pairs:
                if m & bit:
                    c *= d
        else:
            a, b = children[x]
            A, B = sub[a], sub[b]
            C = full & ~sub[x]
            for m, d in pairs:
                if (m & A != 0) + (m & B != 0) + (m & C != 0) >= 2:
                    c *= d
        node[x] = c

    edge_max = 1
    for x in range(1, N):
        side = sub[x]
        c = 1
        for m, d in pairs:
            if m & side and m & ~side & full:
                c *= d
        if c > edge_max:
            edge_max = c

    dp = [0] * N
    for x in reversed(order):
        ch = children[x]
        dp[x] = node[x] + (max(dp[c] for c in ch) if ch else 0)
    critical = dp[children[0][0]] + node[0]
    return node, edge_max, critical


def tree_key(n, parent, masks, dims, objective):
    """``(primary, secondary)`` score of one tree under ``objective``."""
    node, edge_max, critical = _costs(n, parent, masks, dims)
    total = sum(node)
    if objective == OBJ_TOTAL:
        return (total, 0)
    if objective == OBJ_VERTCON:
        return (max(node), total)
    if objective == OBJ_EDGECON:
        return (edge_max, total)
    if objective == OBJ_PARALLEL:
        return (critical, total)
    raise ValueError(f"unknown objective code {objective}")


def enumerate_best(n, masks, dims, objective):
    """Scan all trees; return ``(best_key, best_parent, count)``.

    The first tree in enumeration order wins ties.
    """
    best = None
    best_parent = None
    count = 0
    for parent in iter_parent_arrays(n):
        key = tree_key(n, parent, masks, dims, objective)
        count += 1
        if best is None or key < best:
            best = key
            best_parent = list(parent)
    return best, best_parent, count


def naive_sum(dims, tensors, out_edges, chunk=1 << 16):
    """Sum over every joint assignment of all edge indices.

    ``tensors`` is a list of ``(flat_data, axis_edge_indices)``; the result
    is the flat row-major array over ``out_edges``.
    """
    dims = [int(d) for d in dims]
    total = math.prod(dims)
    out_dims = [dims[e] for e in out_edges]
    out = np.zeros(math.prod(out_dims), dtype=np.complex128)
    shape = tuple(dims) if dims else (1,)
    for lo in range(0, total, chunk):
        lin = np.arange(lo, min(lo + chunk, total))
        idx = np.unravel_index(lin, shape) if dims else ()
        prod = np.ones(lin.size, dtype=np.complex128)
        for data, axes in tensors:
            data = np.asarray(data, dtype=np.complex128).ravel()
            if axes:
                pos = np.ravel_multi_index(
                    [idx[e] for e in axes], [dims[e] for e in axes]
                )
                prod *= data[pos]
            else:
                prod *= data[0]
        if out_edges:
            opos = np.ravel_multi_index([idx[e] for e in out_edges], out_dims)
        else:
            opos = np.zeros(lin.size, dtype=np.intp)
        np.add.at(out, opos, prod)
    return out
