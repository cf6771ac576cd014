"""Hairy graph complexes and their Koszul duals for spaces of string links."""

from .engine import BlockKey, build_block, compute_table, cross_check, euler, homology
from .graded_core import InvalidInput
from .linalg import ConsistencyError, SparseMatrix, rank

__all__ = ["BlockKey", "ConsistencyError", "InvalidInput", "SparseMatrix", "build_block",
           "compute_table", "cross_check", "euler", "homology", "rank"]
__version__ = "0.1.0"
