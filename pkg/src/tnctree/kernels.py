"""Kernel dispatch: the compiled extension if importable, else pure Python.

Set ``TNCTREE_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if not os.environ.get("TNCTREE_PURE_PYTHON"):
    try:
        from . import _kernels as _impl  # noqa: F811

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on build
        _impl = _kernels_py

OBJ_TOTAL = _kernels_py.OBJ_TOTAL
OBJ_VERTCON = _kernels_py.OBJ_VERTCON
OBJ_EDGECON = _kernels_py.OBJ_EDGECON
OBJ_PARALLEL = _kernels_py.OBJ_PARALLEL

# largest cost the compiled kernel may accumulate without overflow
INT64_SAFE = 1 << 62

iter_parent_arrays = _kernels_py.iter_parent_arrays
tree_key = _kernels_py.tree_key


def enumerate_best(n, masks, dims, objective, bound=None):
    """Best tree by exhaustive scan; big-integer safe.

    ``bound`` is an upper bound on any cost the scan can produce; when it
    does not fit in 63 bits the pure-Python path is used.
    """
    impl = _impl
    if bound is not None and bound >= INT64_SAFE:
        impl = _kernels_py
    return impl.enumerate_best(n, masks, dims, objective)


def naive_sum(dims, tensors, out_edges):
    return _impl.naive_sum(dims, tensors, out_edges)
