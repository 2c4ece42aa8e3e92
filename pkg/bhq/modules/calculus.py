"""
Closed-form characterizations of query-tree classes.

P^(T) = R_{m(T)-tt}(NP), where m(T) = f(root) + m(LT) + m(RT), minus one when
f(root) is even and m(RT) is odd. A leaf subtree contributes m = 0 (and so
counts as even), which makes the depth-one case m(T) = f(root) fall out of the
same rule.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

from ..core.errors import InputError
from .bh_core import level as check_level
from .query_tree import Leaf, QueryTree, Subtree

# Set up logging
logger = logging.getLogger(__name__)

STRONGEST_CONNECTION = (
    "The strongest known connection is: if BH_q = coBH_q, then PH = (P_{(q-1)-tt}^{NP})^{NP}."
)


def alpha(a: int, b: int) -> int:
    """a+2b-1 if a is even and b is odd, a+2b otherwise."""
    a = check_level(a, "a")
    b = check_level(b, "b")
    return a + 2 * b - 1 if a % 2 == 0 and b % 2 == 1 else a + 2 * b


def m_two_level(j: int, k: int) -> int:
    return alpha(j, k)


def m_three(j: int, k: int, l: int) -> int:
    """Root BH_j, BH_k on the no-branch, BH_l on the yes-branch."""
    j = check_level(j, "j")
    k = check_level(k, "k")
    l = check_level(l, "l")
    total = j + k + l
    return total - 1 if j % 2 == 0 and l % 2 == 1 else total


def _m(subtree: Subtree) -> int:
    if isinstance(subtree, Leaf):
        return 0
    left = _m(subtree.no)
    right = _m(subtree.yes)
    total = subtree.level + left + right
    if subtree.level % 2 == 0 and right % 2 == 1:
        total -= 1
    return total


def m_tree(tree: QueryTree) -> int:
    return _m(tree.root)


class ClassKind(Enum):
    TT_HULL = "TtHull"
    BH_LEVEL = "BhLevelClass"
    TREE_CLASS = "TreeClass"


@dataclass(frozen=True)
class ClassExpression:
    kind: ClassKind
    m: Optional[int] = None
    level: Optional[int] = None
    tree: Optional[QueryTree] = None

    def __post_init__(self):
        if self.kind is ClassKind.TT_HULL and (self.m is None or self.m < 1):
            raise InputError(f"R_{{m-tt}}(NP) needs m >= 1, got {self.m}")
        if self.kind is ClassKind.BH_LEVEL:
            check_level(self.level, "BH level")
        if self.kind is ClassKind.TREE_CLASS and self.tree is None:
            raise InputError("a tree class needs a tree")

    @property
    def rendering(self) -> str:
        if self.kind is ClassKind.TT_HULL:
            return f"R_{{{self.m}-tt}}(NP)"
        if self.kind is ClassKind.BH_LEVEL:
            return f"BH_{self.level}"
        shape = self.tree.two_level_levels()
        if shape is not None:
            j, k, l = shape
            if k == l:
                return f"P^{{BH_{j}[1]:BH_{k}[1]}}"
            return f"P^{{BH_{j}[1]:BH_{k}[1],BH_{l}[1]}}"
        return f"P^({self.tree.render()})"

    def __str__(self) -> str:
        return self.rendering


def characterize(tree: QueryTree) -> ClassExpression:
    """The R_{m-tt}(NP) hull equal to P^(T)."""
    return ClassExpression(ClassKind.TT_HULL, m=m_tree(tree))


def describe(tree: QueryTree) -> ClassExpression:
    return ClassExpression(ClassKind.TREE_CLASS, tree=tree)


def collapse_target(q: int) -> str:
    return f"(P_{{{q}-tt}}^{{NP}})^{{NP}}"


class Relation(Enum):
    EQUAL = "Equal"
    EQUALITY_IMPLIES_COLLAPSE = "EqualityImpliesCollapse"


@dataclass(frozen=True)
class ComparisonVerdict:
    relation: Relation
    m_left: int
    m_right: int
    collapse_message: Optional[str] = None

    @property
    def q(self) -> int:
        return min(self.m_left, self.m_right)

    def render(self) -> str:
        if self.relation is Relation.EQUAL:
            return "EQUAL"
        return f"COLLAPSE q={self.q}"


def _swapped_pair(t1: QueryTree, t2: QueryTree) -> Optional[Tuple[int, int]]:
    """(j, k) with j < k when t1 and t2 are the two orders of BH_j[1] and BH_k[1]."""
    left, right = t1.two_level_levels(), t2.two_level_levels()
    if left is None or right is None:
        return None
    (a, b, b2), (c, d, d2) = left, right
    if b != b2 or d != d2 or (a, b) != (d, c) or a == b:
        return None
    return min(a, b), max(a, b)


def compare(t1: QueryTree, t2: QueryTree) -> ComparisonVerdict:
    m_left, m_right = m_tree(t1), m_tree(t2)
    if m_left == m_right:
        return ComparisonVerdict(Relation.EQUAL, m_left, m_right)
    q = min(m_left, m_right)
    message = (
        f"{describe(t1)} = {characterize(t1)} and {describe(t2)} = {characterize(t2)}; "
        f"they are not equal unless the polynomial hierarchy collapses to {collapse_target(q)}."
    )
    swapped = _swapped_pair(t1, t2)
    if swapped is not None:
        j, k = swapped
        message += (
            f" As the two orders of BH_{j}[1] and BH_{k}[1], equality also collapses it to "
            f"{collapse_target(k + 2 * j)}."
        )
    message += f" {STRONGEST_CONNECTION}"
    return ComparisonVerdict(Relation.EQUALITY_IMPLIES_COLLAPSE, m_left, m_right, message)


class OrderVerdict(Enum):
    ORDER_IRRELEVANT = "OrderIrrelevant"
    ORDER_MATTERS_UNLESS_COLLAPSE = "OrderMattersUnlessCollapse"


def order_matters(j: int, k: int) -> OrderVerdict:
    """Whether P^{BH_j[1]:BH_k[1]} = P^{BH_k[1]:BH_j[1]} for 1 <= j <= k."""
    j = check_level(j, "j")
    k = check_level(k, "k")
    if j > k:
        raise InputError(f"order_matters needs j <= k, got j={j}, k={k}")
    if j == k or (j % 2 == 0 and k == j + 1):
        return OrderVerdict.ORDER_IRRELEVANT
    return OrderVerdict.ORDER_MATTERS_UNLESS_COLLAPSE


def order_matters_message(j: int, k: int) -> str:
    verdict = order_matters(j, k)
    if verdict is OrderVerdict.ORDER_IRRELEVANT:
        return f"P^{{BH_{j}[1]:BH_{k}[1]}} = P^{{BH_{k}[1]:BH_{j}[1]}} = R_{{{m_two_level(j, k)}-tt}}(NP)."
    return (
        f"P^{{BH_{j}[1]:BH_{k}[1]}} = R_{{{m_two_level(j, k)}-tt}}(NP) and "
        f"P^{{BH_{k}[1]:BH_{j}[1]}} = R_{{{m_two_level(k, j)}-tt}}(NP); equality would collapse "
        f"the boolean hierarchy, and with it the polynomial hierarchy to at least "
        f"{collapse_target(k + 2 * j)}. {STRONGEST_CONNECTION}"
    )


def corollary_table(n: int) -> List[Tuple[int, int, OrderVerdict]]:
    n = check_level(n, "n")
    return [(j, k, order_matters(j, k)) for j in range(1, n + 1) for k in range(j, n + 1)]
