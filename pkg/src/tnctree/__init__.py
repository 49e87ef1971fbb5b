"""Contraction trees for tensor networks.

Plan, cost and execute tensor network contractions. Costs are exact
integer products of bond dimensions, read off the vertex and edge
congestions of a contraction tree.
"""

from .circuits import Circuit, Gate, feynman_network, random_circuit, schroedinger_network
from .cost import (
    CostReport,
    cost_report,
    min_peak_memory_order,
    parallel_time,
    peak_memory,
    schroedinger_plan,
    sequential_time,
)
from .decomp import (
    BranchDecomposition,
    TreeDecomposition,
    branch_decomposition_to_embedding,
    branch_width,
    embedding_to_branch_decomposition,
    import_tree_decomposition,
    tree_width,
    validate_embedding_as_tree_decomposition,
)
from .executor import (
    MemoryTracker,
    execute,
    execute_parallel,
    execute_sliced,
    naive_oracle,
)
from .formats import parse_network, parse_tree, read_network, read_tree
from .kernels import BACKEND
from .network import (
    Edge,
    Network,
    absorb_open_legs,
    contract_symbolic,
    line_graph,
    weighted_degree,
)
from .planner import (
    CapExceeded,
    Objective,
    SlicePlan,
    brute_force_plan,
    greedy_plan,
    linear_plan,
    make_slice_plan,
)
from .tensor import DenseTensor, contract_pair
from .tree import (
    ContractionTree,
    compute_routings,
    congestion,
    orders_from_tree,
    root,
    tree_from_order,
    unroot,
)

__version__ = "0.1.0"
