"""
Ascending paths, mind-change losses and the witness paths of two-level trees.

A path is described by group operators e_g: e_g sets the lowest zero bit of
group g (groups are numbered from 1 in node preorder, so for a two-level tree
e1 is the first query, e2 the no-branch query and e3 the yes-branch query).
"""

import re
import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, List, Tuple

from ..core.errors import InputError
from .bh_core import level as check_level
from .hypercube import CubeDescriptor, Vertex, build_cube, vertex_leaf
from .query_tree import LeafLabeling, QueryTree

# Set up logging
logger = logging.getLogger(__name__)

_STEP = re.compile(r"^e(\d+)$")


@dataclass(frozen=True)
class PathDescription:
    steps: Tuple[int, ...]

    @classmethod
    def parse(cls, text: str) -> "PathDescription":
        """Parse "e2,e2,e1,..." (whitespace allowed)."""
        steps = []
        for raw in re.split(r"[\s,]+", text.strip()):
            if not raw:
                continue
            m = _STEP.match(raw.lower())
            if m is None or int(m.group(1)) < 1:
                raise InputError(f"path steps look like e1, e2, ...; found {raw!r}")
            steps.append(int(m.group(1)))
        if not steps:
            raise InputError("path is empty")
        return cls(tuple(steps))

    @classmethod
    def of(cls, *groups: int) -> "PathDescription":
        return cls(tuple(groups))

    def render(self) -> str:
        return ",".join(f"e{g}" for g in self.steps)

    def __len__(self) -> int:
        return len(self.steps)

    def validate(self, cube: CubeDescriptor) -> None:
        """Each group g must appear exactly span(g) times."""
        counts = Counter(self.steps)
        unknown = sorted(g for g in counts if g > len(cube.groups))
        if unknown:
            raise InputError(f"path uses e{unknown[0]} but the cube has {len(cube.groups)} groups")
        for g, group in enumerate(cube.groups, start=1):
            if counts.get(g, 0) != group.span:
                raise InputError(f"e{g} must appear {group.span} times, found {counts.get(g, 0)}")

    def vertices(self, cube: CubeDescriptor) -> List[Vertex]:
        """v_0 = origin, v_i = e_{g_i}(v_{i-1})."""
        self.validate(cube)
        v = 0
        filled = [0] * len(cube.groups)
        sequence = [v]
        for g in self.steps:
            group = cube.groups[g - 1]
            v |= 1 << (group.start + filled[g - 1])
            filled[g - 1] += 1
            sequence.append(v)
        return sequence


def path_mind_changes(tree: QueryTree, labeling: LeafLabeling, path: PathDescription) -> int:
    """Number of outcome flips along the path's vertex sequence."""
    labeling.check_for(tree)
    cube = build_cube(tree)
    outcomes = [labeling.accepts[vertex_leaf(tree, cube, v)] for v in path.vertices(cube)]
    return sum(1 for a, b in zip(outcomes, outcomes[1:]) if a != b)


class LossKind(Enum):
    E2_LOSS = "E2Loss"
    E3_LOSS = "E3Loss"
    ODD_EPISODE = "OddEpisode"
    DEGENERATE_SECOND_STAGE = "DegenerateSecondStage"


@dataclass(frozen=True)
class LossEvent:
    """A forced loss; start/end are 1-based step positions (equal for single steps)."""
    kind: LossKind
    start: int
    end: int

    def __str__(self) -> str:
        if self.start == self.end:
            return f"{self.kind.value}@{self.start}"
        return f"{self.kind.value}@{self.start}..{self.end}"


def detect_losses(j: int, k: int, path: PathDescription) -> List[LossEvent]:
    """Structural losses of a two-level (j, k) path.

    e2 after an odd number of e1's and e3 after an even number of e1's touch a
    query that is never asked; an episode (e1 ... e1 with no interior e1, length
    at least 3) of odd length closes an odd cycle.
    """
    j = check_level(j, "j")
    k = check_level(k, "k")
    extra = sorted(g for g in set(path.steps) if g > 3)
    if extra:
        raise InputError(f"loss analysis is defined for e1/e2/e3 only, found e{extra[0]}")
    path.validate(build_cube(QueryTree.two_level(j, k)))

    events: List[LossEvent] = []
    ones = 0
    last_one = None
    for position, g in enumerate(path.steps, start=1):
        if g == 1:
            if last_one is not None:
                length = position - last_one + 1
                if length >= 3 and length % 2 == 1:
                    events.append(LossEvent(LossKind.ODD_EPISODE, last_one, position))
            last_one = position
            ones += 1
        elif g == 2 and ones % 2 == 1:
            events.append(LossEvent(LossKind.E2_LOSS, position, position))
        elif g == 3 and ones % 2 == 0:
            events.append(LossEvent(LossKind.E3_LOSS, position, position))
    events.sort(key=lambda e: (e.start, e.end))
    return events


def second_stage_degenerate(labeling: LeafLabeling) -> List[LossEvent]:
    """DegenerateSecondStage events of a two-level labeling.

    A second-stage node whose two leaves share an outcome makes the machine
    ignore that query; start/end carry the node's group number (2 or 3).
    """
    if len(labeling) != 4:
        raise InputError("second-stage degeneracy is defined for two-level trees (4 leaves)")
    events = []
    for group, (no_leaf, yes_leaf) in ((2, (0, 1)), (3, (2, 3))):
        if labeling.accepts[no_leaf] == labeling.accepts[yes_leaf]:
            events.append(LossEvent(LossKind.DEGENERATE_SECOND_STAGE, group, group))
    return events


def witness(j: int, k: int) -> Tuple[PathDescription, int]:
    """Path realizing the capacity of P^{BH_j[1]:BH_k[1]} and its acceptance scheme.

    j even: (e2^k, e1^(j-1), e3^k, e1); j odd: (e2^k, e1^j, e3^k).
    Scheme (3) for k odd, (1) for k even.
    """
    j = check_level(j, "j")
    k = check_level(k, "k")
    if j % 2 == 0:
        steps = (2,) * k + (1,) * (j - 1) + (3,) * k + (1,)
    else:
        steps = (2,) * k + (1,) * j + (3,) * k
    return PathDescription(steps), (3 if k % 2 == 1 else 1)


def ascending_paths(j: int, k: int) -> Iterator[PathDescription]:
    """Every distinct e1/e2/e3 description of the two-level (j, k) cube."""
    remaining = {1: check_level(j, "j"), 2: check_level(k, "k"), 3: k}
    total = j + 2 * k
    steps: List[int] = []

    def extend() -> Iterator[PathDescription]:
        if len(steps) == total:
            yield PathDescription(tuple(steps))
            return
        for g in (1, 2, 3):
            if remaining[g]:
                remaining[g] -= 1
                steps.append(g)
                yield from extend()
                steps.pop()
                remaining[g] += 1

    yield from extend()
