"""
Brute-force machine capacity: the maximum, over every leaf labeling, of the
top-vertex mind-change label.

Labelings are numbered by a counter whose bit i is the outcome of leaf i
(preorder). Complementing every leaf keeps every flip, so only counters with
the last leaf rejecting are scored. Ranges of counters are independent and
their results combine by max, so they can be spread over worker processes.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..core.config import LimitsConfig
from ..core.errors import ResourceError
from .hypercube import DEFAULT_MAX_DIM, MindChangeEngine
from .query_tree import LeafLabeling, QueryTree, parse_tree

# Set up logging
logger = logging.getLogger(__name__)

# Cells (labelings x vertices) scored per numpy batch.
_BATCH_CELLS = 1 << 22

DEFAULT_MAX_LEAVES = LimitsConfig().max_leaves


@dataclass(frozen=True)
class CapacityResult:
    capacity: int
    witness: LeafLabeling
    labelings_checked: int


def _accept_matrix(counters: np.ndarray, leaf_count: int) -> np.ndarray:
    return ((counters[:, None] >> np.arange(leaf_count)) & 1).astype(bool)


def _score_range(engine: MindChangeEngine, start: int, stop: int, stop_at: Optional[int]) -> Tuple[int, int, int]:
    """(best label, lowest counter reaching it, labelings scored) over [start, stop)."""
    rows = max(1, _BATCH_CELLS >> engine.cube.dimension)
    best, best_counter, scored = -1, start, 0
    for chunk_start in range(start, stop, rows):
        counters = np.arange(chunk_start, min(stop, chunk_start + rows), dtype=np.int64)
        tops = engine.top_labels(_accept_matrix(counters, engine.tree.leaf_count))
        scored += len(counters)
        idx = int(np.argmax(tops))
        if int(tops[idx]) > best:
            best, best_counter = int(tops[idx]), int(counters[idx])
        if stop_at is not None and best >= stop_at:
            break
    return best, best_counter, scored


def _score_range_in_worker(tree_text: str, max_dim: int, start: int, stop: int) -> Tuple[int, int, int]:
    engine = MindChangeEngine(parse_tree(tree_text), max_dim)
    return _score_range(engine, start, stop, None)


def _partition(total: int, parts: int) -> List[Tuple[int, int]]:
    step = -(-total // parts)
    return [(s, min(total, s + step)) for s in range(0, total, step)]


def check_caps(tree: QueryTree, max_dim: int, max_leaves: int) -> None:
    if tree.dimension > max_dim:
        raise ResourceError("dimension", max_dim, tree.dimension)
    if tree.leaf_count > max_leaves:
        raise ResourceError("leaf", max_leaves, tree.leaf_count)


def capacity_search(
    tree: QueryTree,
    max_dim: int = DEFAULT_MAX_DIM,
    max_leaves: int = DEFAULT_MAX_LEAVES,
    workers: int = 1,
) -> CapacityResult:
    """Maximum mind changes over all labelings, with the lowest-numbered labeling attaining it."""
    check_caps(tree, max_dim, max_leaves)
    total = 1 << (tree.leaf_count - 1)
    logger.debug(
        "capacity brute force for %s: %d labelings on a %d-cube, %d worker(s)",
        tree.render(), total, tree.dimension, workers,
    )

    if workers <= 1 or total < 2 * workers:
        engine = MindChangeEngine(tree, max_dim)
        best, counter, scored = _score_range(engine, 0, total, tree.dimension)
    else:
        results = []
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [
                executor.submit(_score_range_in_worker, tree.render(), max_dim, start, stop)
                for start, stop in _partition(total, workers)
            ]
            results = [f.result() for f in futures]
        best = max(r[0] for r in results)
        counter = min(r[1] for r in results if r[0] == best)
        scored = sum(r[2] for r in results)

    return CapacityResult(best, LeafLabeling.from_counter(counter, tree.leaf_count), scored)


def capacity_brute_force(
    tree: QueryTree,
    max_dim: int = DEFAULT_MAX_DIM,
    max_leaves: int = DEFAULT_MAX_LEAVES,
    workers: int = 1,
) -> int:
    return capacity_search(tree, max_dim, max_leaves, workers).capacity
