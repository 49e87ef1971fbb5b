# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: exhaustive tree scoring and naive summation.

Mirrors ``_kernels_py`` exactly. Costs use signed 64-bit integers; the
caller guarantees they cannot overflow.
"""

from libc.stdlib cimport malloc, free
import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef unsigned long long u64
ctypedef long long i64

OBJ_TOTAL = 0
OBJ_VERTCON = 1
OBJ_EDGECON = 2
OBJ_PARALLEL = 3


cdef struct Ctx:
    int n
    int N
    int m
    int objective
    u64 *masks
    i64 *dims
    i64 *leafcost
    int *parent
    int *best_parent
    int *nchild
    int *child0
    int *child1
    int *order
    u64 *sub
    i64 *node
    i64 *dp
    i64 best0
    i64 best1
    int have_best
    i64 count


cdef void _evaluate(Ctx *c) noexcept nogil:
    cdef int n = c.n, N = c.N, m = c.m
    cdef int x, p, i, head, tail, e, a, b, hits
    cdef u64 full = (<u64>1 << n) - 1
    cdef u64 A, B, C, side, mk
    cdef i64 cost, total = 0, vmax = 0, emax = 1, da, db, key0, key1

    for x in range(N):
        c.nchild[x] = 0
    for x in range(1, N):
        p = c.parent[x]
        if c.nchild[p] == 0:
            c.child0[p] = x
        else:
            c.child1[p] = x
        c.nchild[p] += 1

    c.order[0] = 0
    head = 0
    tail = 1
    while head < tail:
        x = c.order[head]
        head += 1
        if c.nchild[x] >= 1:
            c.order[tail] = c.child0[x]
            tail += 1
        if c.nchild[x] == 2:
            c.order[tail] = c.child1[x]
            tail += 1

    for i in range(N - 1, -1, -1):
        x = c.order[i]
        if x < n:
            c.sub[x] = <u64>1 << x
        else:
            c.sub[x] = c.sub[c.child0[x]] | c.sub[c.child1[x]]

    for x in range(N):
        if x < n:
            cost = c.leafcost[x]
        else:
            A = c.sub[c.child0[x]]
            B = c.sub[c.child1[x]]
            C = full & ~c.sub[x]
            cost = 1
            for e in range(m):
                mk = c.masks[e]
                hits = (mk & A != 0) + (mk & B != 0) + (mk & C != 0)
                if hits >= 2:
                    cost *= c.dims[e]
        c.node[x] = cost
        total += cost
        if cost > vmax:
            vmax = cost

    if c.objective == 2:
        for x in range(1, N):
            side = c.sub[x]
            cost = 1
            for e in range(m):
                mk = c.masks[e]
                if (mk & side) != 0 and (mk & ~side & full) != 0:
                    cost *= c.dims[e]
            if cost > emax:
                emax = cost

    if c.objective == 3:
        for i in range(N - 1, -1, -1):
            x = c.order[i]
            if c.nchild[x] == 0:
                c.dp[x] = c.node[x]
            elif c.nchild[x] == 1:
                c.dp[x] = c.node[x] + c.dp[c.child0[x]]
            else:
                da = c.dp[c.child0[x]]
                db = c.dp[c.child1[x]]
                c.dp[x] = c.node[x] + (da if da > db else db)

    if c.objective == 0:
        key0 = total
        key1 = 0
    elif c.objective == 1:
        key0 = vmax
        key1 = total
    elif c.objective == 2:
        key0 = emax
        key1 = total
    else:
        key0 = c.dp[c.child0[0]] + c.node[0]
        key1 = total

    c.count += 1
    if (not c.have_best) or key0 < c.best0 or (key0 == c.best0 and key1 < c.best1):
        c.have_best = 1
        c.best0 = key0
        c.best1 = key1
        for x in range(N):
            c.best_parent[x] = c.parent[x]


cdef void _rec(Ctx *c, int k) noexcept nogil:
    cdef int s, cand, p
    if k == c.n:
        _evaluate(c)
        return
    s = c.n + k - 2
    for cand in range(1, k):
        p = c.parent[cand]
        c.parent[s] = p
        c.parent[cand] = s
        c.parent[k] = s
        _rec(c, k + 1)
        c.parent[cand] = p
    for cand in range(c.n, s):
        p = c.parent[cand]
        c.parent[s] = p
        c.parent[cand] = s
        c.parent[k] = s
        _rec(c, k + 1)
        c.parent[cand] = p
    c.parent[k] = -1
    c.parent[s] = -1


def enumerate_best(int n, masks, dims, int objective):
    """Scan all trees; return ``(best_key, best_parent, count)``."""
    cdef Ctx c
    cdef int N = 2 * n - 2
    cdef int m = len(masks)
    cdef int i, x, e
    if n < 3 or n > 62:
        raise ValueError("compiled enumeration supports 3 <= n <= 62")
    if objective < 0 or objective > 3:
        raise ValueError(f"unknown objective code {objective}")
    c.n = n
    c.N = N
    c.m = m
    c.objective = objective
    c.have_best = 0
    c.count = 0
    c.best0 = 0
    c.best1 = 0
    c.masks = <u64 *> malloc(max(m, 1) * sizeof(u64))
    c.dims = <i64 *> malloc(max(m, 1) * sizeof(i64))
    c.leafcost = <i64 *> malloc(n * sizeof(i64))
    c.parent = <int *> malloc(N * sizeof(int))
    c.best_parent = <int *> malloc(N * sizeof(int))
    c.nchild = <int *> malloc(N * sizeof(int))
    c.child0 = <int *> malloc(N * sizeof(int))
    c.child1 = <int *> malloc(N * sizeof(int))
    c.order = <int *> malloc(N * sizeof(int))
    c.sub = <u64 *> malloc(N * sizeof(u64))
    c.node = <i64 *> malloc(N * sizeof(i64))
    c.dp = <i64 *> malloc(N * sizeof(i64))
    try:
        for e in range(m):
            c.masks[e] = <u64> masks[e]
            c.dims[e] = <i64> dims[e]
        for x in range(n):
            c.leafcost[x] = 1
            for e in range(m):
                if (c.masks[e] >> x) & 1:
                    c.leafcost[x] *= c.dims[e]
        for i in range(N):
            c.parent[i] = -1
        c.parent[1] = n
        c.parent[2] = n
        c.parent[n] = 0
        with nogil:
            _rec(&c, 3)
        best = [c.best_parent[i] for i in range(N)]
        return (c.best0, c.best1), best, c.count
    finally:
        free(c.masks)
        free(c.dims)
        free(c.leafcost)
        free(c.parent)
        free(c.best_parent)
        free(c.nchild)
        free(c.child0)
        free(c.child1)
        free(c.order)
        free(c.sub)
        free(c.node)
        free(c.dp)


def naive_sum(dims, tensors, out_edges, chunk=None):
    """Sum over every joint assignment of all edge indices.

    ``tensors`` is a list of ``(flat_data, axis_edge_indices)``; the result
    is the flat row-major array over ``out_edges``.
    """
    cdef int E = len(dims)
    cdef int T = len(tensors)
    cdef int R = len(out_edges)
    cdef Py_ssize_t t, j, k, total = 1, nout = 1, off, ooff
    cdef double complex prod
    cdef cnp.ndarray[cnp.int64_t, ndim=1] cdims = np.asarray(dims, dtype=np.int64).reshape(-1)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] idx = np.zeros(max(E, 1), dtype=np.int64)

    datas = []
    ranks = []
    for data, axes in tensors:
        datas.append(np.ascontiguousarray(np.asarray(data, dtype=np.complex128).ravel()))
        ranks.append(len(axes))
    cdef Py_ssize_t nax = sum(ranks)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] base = np.zeros(T + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] rk = np.asarray(ranks + [0], dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] axe = np.zeros(max(nax, 1), dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] axs = np.zeros(max(nax, 1), dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] dstart = np.zeros(T + 1, dtype=np.int64)
    pos = 0
    start = 0
    for t in range(T):
        axes = list(tensors[t][1])
        stride = 1
        strides = []
        for e in reversed(axes):
            strides.append(stride)
            stride *= int(dims[e])
        strides.reverse()
        base[t] = pos
        dstart[t] = start
        for j in range(len(axes)):
            axe[pos + j] = axes[j]
            axs[pos + j] = strides[j]
        pos += len(axes)
        start += datas[t].size
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] flat = (
        np.concatenate(datas) if datas else np.zeros(1, dtype=np.complex128)
    )
    cdef cnp.ndarray[cnp.int64_t, ndim=1] oe = np.zeros(max(R, 1), dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] os_ = np.zeros(max(R, 1), dtype=np.int64)
    stride = 1
    for j in range(R - 1, -1, -1):
        oe[j] = out_edges[j]
        os_[j] = stride
        stride *= int(dims[out_edges[j]])
    nout = stride
    for j in range(E):
        total *= cdims[j]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.zeros(nout, dtype=np.complex128)

    cdef Py_ssize_t it
    for it in range(total):
        prod = 1.0
        for t in range(T):
            off = 0
            for j in range(base[t], base[t] + rk[t]):
                off += idx[axe[j]] * axs[j]
            prod = prod * flat[dstart[t] + off]
        ooff = 0
        for j in range(R):
            ooff += idx[oe[j]] * os_[j]
        out[ooff] += prod
        k = E - 1
        while k >= 0:
            idx[k] += 1
            if idx[k] < cdims[k]:
                break
            idx[k] = 0
            k -= 1
    return out
