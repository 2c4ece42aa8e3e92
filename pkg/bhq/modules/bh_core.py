"""
Boolean-hierarchy primitives: telescoping chains, nested-difference evaluation
and answer-vector semantics.

A set in BH_m is kept in the normal form S_1 - (S_2 - (... - S_m)) with
S_m ⊆ ... ⊆ S_1, so membership of x only depends on the deepest index that
still contains x.
"""

import json
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, FrozenSet, Iterable, Optional, Sequence, Tuple

from ..core.errors import InputError

# Set up logging
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BhLevel:
    """A level of the boolean hierarchy (BH_1 = NP)."""
    value: int

    def __post_init__(self):
        if isinstance(self.value, bool) or not isinstance(self.value, int):
            raise InputError(f"boolean-hierarchy level must be an integer, got {self.value!r}")
        if self.value < 1:
            raise InputError(f"boolean-hierarchy level must be >= 1, got {self.value}")

    def __int__(self) -> int:
        return self.value

    @property
    def is_even(self) -> bool:
        return self.value % 2 == 0


def level(value: Any, name: str = "level") -> int:
    """Validate a level given as int or BhLevel and return it as int."""
    if isinstance(value, BhLevel):
        return value.value
    try:
        return BhLevel(value).value
    except InputError as e:
        raise InputError(f"{name}: {e}") from None


@dataclass(frozen=True)
class AnswerVector:
    """Answers to "q in C_1?", ..., "q in C_m?" in that order."""
    bits: Tuple[bool, ...]

    def __post_init__(self):
        if len(self.bits) < 1:
            raise InputError("answer vector must have at least one bit")
        object.__setattr__(self, "bits", tuple(bool(b) for b in self.bits))

    @classmethod
    def of(cls, *bits: Any) -> "AnswerVector":
        return cls(tuple(bool(b) for b in bits))

    def __len__(self) -> int:
        return len(self.bits)


def eval_answer_vector(v: AnswerVector) -> bool:
    """Evaluate a_1 ∧ ¬(a_2 ∧ ¬(a_3 ∧ ¬(...))) on the raw bits."""
    result = v.bits[-1]
    for bit in reversed(v.bits[:-1]):
        result = bit and not result
    return result


def longest_ones_prefix(v: AnswerVector) -> int:
    """Length of the maximal all-ones prefix."""
    count = 0
    for bit in v.bits:
        if not bit:
            break
        count += 1
    return count


@dataclass(frozen=True)
class ChainViolation:
    """First invariant a candidate chain breaks.

    kind is "outside-universe" (indices = (i,)) or "not-nested"
    (indices = (i, i+1), S_{i+1} ⊄ S_i). Indices are 1-based.
    """
    kind: str
    indices: Tuple[int, ...]
    elements: Tuple[str, ...]

    def __str__(self) -> str:
        where = ",".join(str(i) for i in self.indices)
        return f"{self.kind} at ({where}): {', '.join(self.elements)}"


@dataclass(frozen=True)
class TelescopingChain:
    """Sets S_1 … S_m over a finite universe, meant to satisfy S_{i+1} ⊆ S_i."""
    universe: FrozenSet[str]
    sets: Tuple[FrozenSet[str], ...]

    def __post_init__(self):
        object.__setattr__(self, "universe", frozenset(self.universe))
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))
        if len(self.sets) == 0:
            raise InputError("a chain needs at least one set")

    @classmethod
    def build(
        cls,
        universe: Iterable[str],
        sets: Sequence[Iterable[str]],
        normalize: bool = False,
    ) -> "TelescopingChain":
        """Construct and check a chain; with normalize=True nesting is enforced by intersection."""
        chain = cls(frozenset(universe), tuple(frozenset(s) for s in sets))
        if normalize:
            chain = normalize_chain(chain)
        violation = validate_chain(chain)
        if violation is not None:
            raise InputError(f"invalid chain: {violation}")
        return chain

    @classmethod
    def from_depths(cls, universe: Iterable[str], depths: Dict[str, int], length: int) -> "TelescopingChain":
        """Chain where each element sits in exactly S_1..S_depth."""
        universe = frozenset(universe)
        sets = tuple(
            frozenset(x for x, d in depths.items() if d >= i)
            for i in range(1, length + 1)
        )
        return cls(universe, sets)

    @property
    def length(self) -> int:
        return len(self.sets)

    @cached_property
    def violation(self) -> Optional[ChainViolation]:
        """First telescoping violation, or None."""
        return validate_chain(self)

    def depth(self, x: str) -> int:
        """max{i : x in S_i}, 0 if x is in no set."""
        t = 0
        for i, s in enumerate(self.sets, start=1):
            if x in s:
                t = i
        return t

    def membership_bits(self, x: str) -> AnswerVector:
        """(x in S_1, ..., x in S_l)."""
        return AnswerVector(tuple(x in s for s in self.sets))

    def language(self) -> FrozenSet[str]:
        """Members at odd depth, the language S_1 - S_2 + S_3 - ... names."""
        return frozenset(x for x in self.universe if self.depth(x) % 2 == 1)

    def to_json(self) -> Dict[str, Any]:
        """Universe and sets as sorted lists."""
        return {
            "universe": sorted(self.universe),
            "sets": [sorted(s) for s in self.sets],
        }

    @classmethod
    def from_json(cls, data: Any, normalize: bool = False) -> "TelescopingChain":
        """Inverse of to_json; data may also be its JSON text."""
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as e:
                raise InputError(f"chain JSON is malformed: {e}") from None
        if not isinstance(data, dict) or "universe" not in data or "sets" not in data:
            raise InputError('chain JSON must be {"universe": [...], "sets": [[...], ...]}')
        return cls.build(data["universe"], data["sets"], normalize=normalize)


def validate_chain(chain: TelescopingChain) -> Optional[ChainViolation]:
    """Return None when the chain is telescoping over its universe, else the first violation."""
    for i, s in enumerate(chain.sets, start=1):
        outside = s - chain.universe
        if outside:
            return ChainViolation("outside-universe", (i,), tuple(sorted(outside)))
    for i in range(1, len(chain.sets)):
        escaped = chain.sets[i] - chain.sets[i - 1]
        if escaped:
            return ChainViolation("not-nested", (i, i + 1), tuple(sorted(escaped)))
    return None


def normalize_chain(chain: TelescopingChain) -> TelescopingChain:
    """Replace each S_i by S_i ∩ S_{i-1}, cumulatively."""
    sets = [chain.sets[0]]
    for s in chain.sets[1:]:
        sets.append(s & sets[-1])
    if tuple(sets) != chain.sets:
        logger.debug("normalized a non-telescoping chain of length %d", chain.length)
    return TelescopingChain(chain.universe, tuple(sets))


def chain_member(chain: TelescopingChain, x: str) -> bool:
    """χ of the nested difference: the deepest containing index is odd."""
    if x not in chain.universe:
        raise InputError(f"element {x!r} is outside the chain's universe")
    if chain.violation is not None:
        raise InputError(f"invalid chain: {chain.violation}")
    return chain.depth(x) % 2 == 1
