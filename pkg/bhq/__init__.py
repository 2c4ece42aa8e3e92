"""
bhq - query trees over the boolean hierarchy.

bhq helps with:
- Characterizing P^(T) as a bounded truth-table hull R_{m-tt}(NP)
- Brute-forcing mind-change capacity on answer hypercubes
- Checking the constructive reductions on finite worlds
"""

__version__ = "0.1.0"
__author__ = "bhq developers"

from .core.config import Config
from .modules.calculus import characterize, compare, m_tree
from .modules.query_tree import QueryTree, parse_tree

__all__ = ["Config", "QueryTree", "parse_tree", "characterize", "compare", "m_tree"]
