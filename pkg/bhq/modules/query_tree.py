"""
Query trees, their text/JSON forms, and leaf labelings.

A query tree is a binary tree whose internal nodes carry a boolean-hierarchy
level; the no-branch is the left child, the yes-branch the right child.
Internal nodes are named v1..vN and leaves are indexed 0..L-1, both in one
preorder walk (node, no-subtree, yes-subtree).
"""

import json
import re
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from ..core.errors import InputError, TreeSyntaxError
from .bh_core import level as check_level

# Set up logging
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Leaf:
    """Leaf of a query tree; its outcome comes from a LeafLabeling."""

    def render(self) -> str:
        return "leaf"


@dataclass(frozen=True)
class Node:
    """Internal query node: one query to a BH_level oracle."""
    level: int
    no: "Subtree"
    yes: "Subtree"

    def __post_init__(self):
        check_level(self.level, "node level")
        for child in (self.no, self.yes):
            if not isinstance(child, (Leaf, Node)):
                raise InputError(f"node children must be nodes or leaves, got {child!r}")

    def render(self) -> str:
        """Grammar form of this subtree."""
        return f"({self.level} {self.no.render()} {self.yes.render()})"


Subtree = Union[Leaf, Node]
LEAF = Leaf()


class QueryTree:
    """A validated query tree with its preorder tables precomputed.

    Child references in the tables are node indices (>= 0) or encoded leaves
    (-1 - leaf_index).
    """

    def __init__(self, root: Subtree):
        if not isinstance(root, Node):
            raise InputError("a query tree needs at least one internal node")
        self.root = root
        self.nodes: List[Node] = []
        self._children: List[Tuple[int, int]] = []
        self._subtrees: List[Subtree] = []
        self.leaf_count = 0
        self._index(root)
        self.levels: Tuple[int, ...] = tuple(n.level for n in self.nodes)
        self.node_ids: Tuple[str, ...] = tuple(f"v{i + 1}" for i in range(len(self.nodes)))

    def _index(self, subtree: Subtree) -> int:
        if isinstance(subtree, Leaf):
            ref = -1 - self.leaf_count
            self.leaf_count += 1
            return ref
        idx = len(self.nodes)
        self.nodes.append(subtree)
        self._children.append((0, 0))
        no_ref = self._index(subtree.no)
        yes_ref = self._index(subtree.yes)
        self._children[idx] = (no_ref, yes_ref)
        return idx

    # -- constructors -------------------------------------------------

    @classmethod
    def depth_one(cls, n: int) -> "QueryTree":
        """A single BH_n query with two leaves."""
        return cls(Node(n, LEAF, LEAF))

    @classmethod
    def two_level(cls, j: int, k: int) -> "QueryTree":
        """P^{BH_j[1]:BH_k[1]}: a BH_j query, then a BH_k query on either branch."""
        return cls.three_oracle(j, k, k)

    @classmethod
    def three_oracle(cls, j: int, k: int, l: int) -> "QueryTree":
        """Root BH_j; BH_k after a "no", BH_l after a "yes"."""
        return cls(Node(j, Node(k, LEAF, LEAF), Node(l, LEAF, LEAF)))

    # -- structure ----------------------------------------------------

    @property
    def dimension(self) -> int:
        """Sum of node levels, the answer-cube dimension."""
        return sum(self.levels)

    def child(self, node_index: int, answer: bool) -> int:
        """Child ref on answer: a node index, or -1 - leaf_index for a leaf."""
        return self._children[node_index][1 if answer else 0]

    def walk(self, answer: Callable[[int], bool]) -> int:
        """Follow the tree from the root using answer(node_index); return the leaf index."""
        ref = 0
        while ref >= 0:
            ref = self.child(ref, answer(ref))
        return -1 - ref

    def edges(self) -> Iterator[Tuple[int, bool, int]]:
        """(node_index, answer, child_ref) for every tree edge."""
        for idx, (no_ref, yes_ref) in enumerate(self._children):
            yield idx, False, no_ref
            yield idx, True, yes_ref

    def two_level_levels(self) -> Optional[Tuple[int, int, int]]:
        """(j, k, l) when the root's children are both depth-one nodes, else None."""
        root = self.root
        children = (root.no, root.yes)
        if all(isinstance(c, Node) and isinstance(c.no, Leaf) and isinstance(c.yes, Leaf) for c in children):
            return root.level, root.no.level, root.yes.level
        return None

    # -- text forms ---------------------------------------------------

    def render(self) -> str:
        """Grammar form, such as "(2 leaf leaf)"."""
        return self.root.render()

    def to_json(self) -> Any:
        """"leaf" or nested {"level", "no", "yes"} dicts."""
        def dump(t: Subtree) -> Any:
            if isinstance(t, Leaf):
                return "leaf"
            return {"level": t.level, "no": dump(t.no), "yes": dump(t.yes)}
        return dump(self.root)

    @classmethod
    def from_json(cls, data: Any) -> "QueryTree":
        """Inverse of to_json; data may also be JSON text."""
        if isinstance(data, str) and data.strip() != "leaf":
            try:
                data = json.loads(data)
            except json.JSONDecodeError as e:
                raise InputError(f"tree JSON is malformed: {e}") from None

        def load(d: Any) -> Subtree:
            if d == "leaf":
                return LEAF
            if not isinstance(d, dict) or set(d) != {"level", "no", "yes"}:
                raise InputError(f'tree JSON nodes are "leaf" or {{"level", "no", "yes"}}, got {d!r}')
            return Node(d["level"], load(d["no"]), load(d["yes"]))

        return cls(load(data))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, QueryTree) and self.root == other.root

    def __hash__(self) -> int:
        return hash(self.root)

    def __repr__(self) -> str:
        return f"QueryTree({self.render()!r})"


_TOKEN = re.compile(r"\s*(?:(?P<open>\()|(?P<close>\))|(?P<int>\d+)|(?P<leaf>leaf\b)|(?P<bad>\S+))")


def _tokens(text: str) -> List[Tuple[str, str, int, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.lastgroup is None:
            break
        kind = m.lastgroup
        start = m.start(kind)
        line = text.count("\n", 0, start) + 1
        column = start - (text.rfind("\n", 0, start) + 1) + 1
        tokens.append((kind, m.group(kind), line, column))
        pos = m.end()
    return tokens


def parse_tree(text: str) -> QueryTree:
    """Parse tree ::= "leaf" | "(" INT tree tree ")" (first subtree = no-branch)."""
    tokens = _tokens(text)
    end_line = text.count("\n") + 1
    end_col = len(text) - (text.rfind("\n") + 1) + 1
    pos = 0

    def expect_more(what: str) -> Tuple[str, str, int, int]:
        if pos >= len(tokens):
            raise TreeSyntaxError(f"unexpected end of input, expected {what}", end_line, end_col)
        return tokens[pos]

    def subtree() -> Subtree:
        nonlocal pos
        kind, value, line, col = expect_more("'(' or 'leaf'")
        if kind == "leaf":
            pos += 1
            return LEAF
        if kind != "open":
            raise TreeSyntaxError(f"expected '(' or 'leaf', found {value!r}", line, col)
        pos += 1
        kind, value, line, col = expect_more("a level")
        if kind != "int":
            raise TreeSyntaxError(f"expected a level, found {value!r}", line, col)
        lvl = int(value)
        if lvl < 1:
            raise InputError(f"node level must be >= 1, found {lvl} at line {line}, column {col}")
        pos += 1
        no = subtree()
        yes = subtree()
        kind, value, line, col = expect_more("')'")
        if kind != "close":
            raise TreeSyntaxError(f"expected ')', found {value!r}", line, col)
        pos += 1
        return Node(lvl, no, yes)

    root = subtree()
    if pos < len(tokens):
        _, value, line, col = tokens[pos]
        raise TreeSyntaxError(f"trailing input {value!r}", line, col)
    return QueryTree(root)


def load_tree(text: str, as_json: bool = False) -> QueryTree:
    """Grammar text, or JSON text when as_json."""
    return QueryTree.from_json(text) if as_json else parse_tree(text)


class Outcome(Enum):
    ACCEPT = "A"
    REJECT = "R"


@dataclass(frozen=True)
class LeafLabeling:
    """Accept/Reject per leaf, indexed by leaf preorder position."""
    accepts: Tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "accepts", tuple(bool(a) for a in self.accepts))

    def __len__(self) -> int:
        return len(self.accepts)

    def outcome(self, leaf_index: int) -> Outcome:
        """Outcome of one leaf (preorder index)."""
        return Outcome.ACCEPT if self.accepts[leaf_index] else Outcome.REJECT

    def check_for(self, tree: QueryTree) -> None:
        """Raise InputError unless there is one outcome per leaf of tree."""
        if len(self.accepts) != tree.leaf_count:
            raise InputError(f"labeling has {len(self.accepts)} leaves, tree has {tree.leaf_count}")

    @property
    def counter(self) -> int:
        """Inverse of from_counter."""
        return sum(1 << i for i, a in enumerate(self.accepts) if a)

    def render(self) -> str:
        """One R or A per leaf, such as "RARA"."""
        return "".join(self.outcome(i).value for i in range(len(self.accepts)))

    @classmethod
    def from_counter(cls, counter: int, leaf_count: int) -> "LeafLabeling":
        """Bit i of counter is the outcome of leaf i."""
        return cls(tuple(bool((counter >> i) & 1) for i in range(leaf_count)))

    @classmethod
    def from_text(cls, text: str) -> "LeafLabeling":
        """Parse "RARA", "0101" or a separated list such as "R, A, R"."""
        cleaned = text.strip().strip("[]")
        if re.search(r"[\s,]", cleaned):
            parts = re.split(r"[\s,]+", cleaned)
        else:
            parts = list(cleaned)
        return cls.from_symbols([p.strip("'\"") for p in parts if p])

    @classmethod
    def from_symbols(cls, symbols: Sequence[Any]) -> "LeafLabeling":
        """Parse a sequence of A/R, 1/0 or booleans."""
        if isinstance(symbols, str):
            return cls.from_text(symbols)
        accepts = []
        for s in symbols:
            if isinstance(s, (bool, int)) and s in (0, 1):
                accepts.append(bool(s))
            elif isinstance(s, str) and s.upper() in ("A", "1"):
                accepts.append(True)
            elif isinstance(s, str) and s.upper() in ("R", "0"):
                accepts.append(False)
            else:
                raise InputError(f"labeling symbols are A/R or 1/0, found {s!r}")
        if not accepts:
            raise InputError("labeling is empty")
        return cls(tuple(accepts))

    @classmethod
    def all_reject(cls, leaf_count: int) -> "LeafLabeling":
        return cls((False,) * leaf_count)

    @classmethod
    def all_accept(cls, leaf_count: int) -> "LeafLabeling":
        return cls((True,) * leaf_count)

    @classmethod
    def scheme(cls, number: int) -> "LeafLabeling":
        """Acceptance schemes for two-level trees.

        Leaves of (j (k leaf leaf) (l leaf leaf)) in preorder are
        (no,no), (no,yes), (yes,no), (yes,yes) for (first, second) answers.
        (1) exactly one answer yes, (2) both or neither, (3) second yes, (4) second no.
        """
        rules: Dict[int, Callable[[bool, bool], bool]] = {
            1: lambda a, b: a != b,
            2: lambda a, b: a == b,
            3: lambda a, b: b,
            4: lambda a, b: not b,
        }
        if number not in rules:
            raise InputError(f"acceptance schemes are numbered 1-4, got {number}")
        rule = rules[number]
        return cls(tuple(rule(a, b) for a in (False, True) for b in (False, True)))
