"""
Domain modules for bhq.
"""

from .bh_core import TelescopingChain, chain_member
from .calculus import characterize, compare, m_tree, order_matters
from .capacity import capacity_brute_force, capacity_search
from .finite_world import FiniteWorld, OracleMachineSpec, TruthTableReduction, VerificationReport
from .hypercube import build_cube, machine_mind_changes, mind_change_labels
from .query_tree import LeafLabeling, QueryTree, parse_tree

__all__ = [
    "TelescopingChain",
    "chain_member",
    "characterize",
    "compare",
    "m_tree",
    "order_matters",
    "capacity_brute_force",
    "capacity_search",
    "FiniteWorld",
    "OracleMachineSpec",
    "TruthTableReduction",
    "VerificationReport",
    "build_cube",
    "machine_mind_changes",
    "mind_change_labels",
    "LeafLabeling",
    "QueryTree",
    "parse_tree",
]
