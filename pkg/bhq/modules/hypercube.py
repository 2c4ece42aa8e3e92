"""
Answer hypercubes and the mind-change labeling.

Every internal node of a query tree contributes one group of dimensions (its
chain queries C_1..C_n, outermost first); groups follow node preorder. A vertex
is packed into an int: bit i is dimension i+1. The labeling assigns the origin
0 and every other vertex the maximum, over its immediate predecessors, of the
predecessor's label plus one if the outcome flips along that edge. Visiting
vertices layer by layer in Hamming-weight order realizes this in one pass.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.config import LimitsConfig
from ..core.errors import InputError, ResourceError
from .bh_core import AnswerVector, eval_answer_vector
from .query_tree import LeafLabeling, Outcome, QueryTree

# Set up logging
logger = logging.getLogger(__name__)

# Dimension cap applied when a caller gives none.
DEFAULT_MAX_DIM = LimitsConfig().max_dim

Vertex = int
VertexLike = Union[int, Sequence[int]]
# Per Hamming weight, (vertices, predecessors) pairs, one per flipped bit.
LayerTables = List[List[Tuple[np.ndarray, np.ndarray]]]

# Layer edge tables up to this dimension are shared process-wide; larger ones
# belong to the engine that built them.
_CACHED_LAYER_DIM = 16


@dataclass(frozen=True)
class CubeGroup:
    """Dimensions [start, start + span) belong to node node_id (0-based indices)."""
    node_id: str
    start: int
    span: int

    @property
    def dimensions(self) -> range:
        """1-based dimension indices covered by this group."""
        return range(self.start + 1, self.start + self.span + 1)


@dataclass(frozen=True)
class CubeDescriptor:
    dimension: int
    groups: Tuple[CubeGroup, ...]

    @property
    def spans(self) -> Tuple[int, ...]:
        return tuple(g.span for g in self.groups)

    @property
    def size(self) -> int:
        return 1 << self.dimension

    @property
    def top(self) -> Vertex:
        return self.size - 1

    def group(self, node_id: str) -> CubeGroup:
        for g in self.groups:
            if g.node_id == node_id:
                return g
        raise InputError(f"no node {node_id!r} in this cube")


def build_cube(tree: QueryTree, max_dim: Optional[int] = None) -> CubeDescriptor:
    """One group per internal node in preorder; dimension = sum of levels."""
    groups = []
    start = 0
    for node_id, span in zip(tree.node_ids, tree.levels):
        groups.append(CubeGroup(node_id, start, span))
        start += span
    if max_dim is not None and start > max_dim:
        raise ResourceError("dimension", max_dim, start)
    return CubeDescriptor(start, tuple(groups))


def vertex_from_bits(bits: Sequence[int]) -> Vertex:
    return sum(1 << i for i, b in enumerate(bits) if b)


def vertex_bits(v: Vertex, dimension: int) -> Tuple[int, ...]:
    return tuple((v >> i) & 1 for i in range(dimension))


def as_vertex(v: VertexLike, cube: CubeDescriptor) -> Vertex:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        vertex = int(v)
        if not 0 <= vertex < cube.size:
            raise InputError(f"vertex {vertex} is outside the {cube.dimension}-cube")
        return vertex
    bits = tuple(v)
    if len(bits) != cube.dimension:
        raise InputError(f"vertex has {len(bits)} bits, cube has dimension {cube.dimension}")
    return vertex_from_bits(bits)


def group_answer(v: Vertex, group: CubeGroup) -> bool:
    bits = tuple((v >> b) & 1 for b in range(group.start, group.start + group.span))
    return eval_answer_vector(AnswerVector(bits))


def vertex_leaf(tree: QueryTree, cube: CubeDescriptor, v: Vertex) -> int:
    return tree.walk(lambda idx: group_answer(v, cube.groups[idx]))


def vertex_outcome(tree: QueryTree, labeling: LeafLabeling, v: VertexLike) -> Outcome:
    """Outcome of the machine if the answers were exactly v."""
    labeling.check_for(tree)
    cube = build_cube(tree)
    return labeling.outcome(vertex_leaf(tree, cube, as_vertex(v, cube)))


def _build_layers(dimension: int) -> LayerTables:
    index_type = np.int32 if dimension < 31 else np.int64
    vertices = np.arange(1 << dimension, dtype=index_type)
    weight = np.zeros(vertices.shape, dtype=np.int8)
    for b in range(dimension):
        weight += ((vertices >> b) & 1).astype(np.int8)
    layers = []
    for w in range(1, dimension + 1):
        layer = vertices[weight == w]
        edges = []
        for b in range(dimension):
            sub = layer[((layer >> b) & 1) == 1]
            if sub.size:
                edges.append((sub, sub ^ index_type(1 << b)))
        layers.append(edges)
    return layers


@lru_cache(maxsize=8)
def _cached_layers(dimension: int) -> LayerTables:
    return _build_layers(dimension)


def _layers(dimension: int) -> LayerTables:
    if dimension <= _CACHED_LAYER_DIM:
        return _cached_layers(dimension)
    return _build_layers(dimension)


def mind_change_dp(outcomes: np.ndarray, layers: Optional[LayerTables] = None) -> np.ndarray:
    """Inductive max labeling for one or many outcome vectors over the same cube.

    outcomes has shape (2^d,) or (L, 2^d); the result has the same shape.
    layers, when given, must be the edge tables of that dimension.
    """
    single = outcomes.ndim == 1
    out = np.atleast_2d(outcomes).astype(bool)
    size = out.shape[1]
    dimension = size.bit_length() - 1
    if size != 1 << dimension:
        raise InputError(f"outcome vector length {size} is not a power of two")
    labels = np.zeros(out.shape, dtype=np.int16)
    for edges in layers if layers is not None else _layers(dimension):
        for sub, pred in edges:
            candidate = labels[:, pred] + (out[:, sub] != out[:, pred])
            np.maximum(labels[:, sub], candidate, out=candidate)
            labels[:, sub] = candidate
    return labels[0] if single else labels


class MindChangeMap:
    """Mind-change label per vertex of one labeled cube."""

    def __init__(self, cube: CubeDescriptor, labels: np.ndarray):
        self.cube = cube
        self.labels = labels

    def __getitem__(self, v: VertexLike) -> int:
        return int(self.labels[as_vertex(v, self.cube)])

    @property
    def top(self) -> int:
        return int(self.labels[self.cube.top])

    def items(self) -> Iterator[Tuple[Tuple[int, ...], int]]:
        for v in range(self.cube.size):
            yield vertex_bits(v, self.cube.dimension), int(self.labels[v])

    def as_dict(self) -> Dict[Tuple[int, ...], int]:
        return dict(self.items())


class MindChangeEngine:
    """Precomputes the vertex-to-leaf map of a tree so labelings can be scored in bulk.

    max_dim=None applies DEFAULT_MAX_DIM.
    """

    def __init__(self, tree: QueryTree, max_dim: Optional[int] = DEFAULT_MAX_DIM):
        self.tree = tree
        self.cube = build_cube(tree, DEFAULT_MAX_DIM if max_dim is None else max_dim)
        self.leaf_of = self._leaf_map()
        self._layer_tables: Optional[LayerTables] = None
        logger.debug(
            "engine for %s: dimension %d, %d leaves",
            tree.render(), self.cube.dimension, tree.leaf_count,
        )

    def _leaf_map(self) -> np.ndarray:
        vertices = np.arange(self.cube.size, dtype=np.int64)
        answers = []
        for group in self.cube.groups:
            prefix = np.zeros(vertices.shape, dtype=np.int16)
            run = np.ones(vertices.shape, dtype=bool)
            for b in range(group.start, group.start + group.span):
                run &= ((vertices >> b) & 1).astype(bool)
                prefix += run
            answers.append(prefix % 2 == 1)

        leaf_of = np.empty(vertices.shape, dtype=np.int32)

        def assign(ref: int, mask: np.ndarray) -> None:
            if ref < 0:
                leaf_of[mask] = -1 - ref
                return
            assign(self.tree.child(ref, False), mask & ~answers[ref])
            assign(self.tree.child(ref, True), mask & answers[ref])

        assign(0, np.ones(vertices.shape, dtype=bool))
        return leaf_of

    @property
    def layers(self) -> LayerTables:
        """Edge tables of this cube, built on first use."""
        if self._layer_tables is None:
            self._layer_tables = _layers(self.cube.dimension)
        return self._layer_tables

    def outcomes(self, accepts: np.ndarray) -> np.ndarray:
        """accepts: (leaves,) or (L, leaves) booleans → outcome per vertex."""
        accepts = np.asarray(accepts, dtype=bool)
        if accepts.shape[-1] != self.tree.leaf_count:
            raise InputError(f"labeling has {accepts.shape[-1]} leaves, tree has {self.tree.leaf_count}")
        return accepts[..., self.leaf_of]

    def labels(self, labeling: LeafLabeling) -> MindChangeMap:
        labeling.check_for(self.tree)
        return MindChangeMap(self.cube, mind_change_dp(self.outcomes(np.array(labeling.accepts)), self.layers))

    def top_labels(self, accepts: np.ndarray) -> np.ndarray:
        """Top-vertex label for each row of a (L, leaves) accept matrix."""
        return mind_change_dp(self.outcomes(np.atleast_2d(accepts)), self.layers)[:, self.cube.top]


def mind_change_labels(tree: QueryTree, labeling: LeafLabeling, max_dim: Optional[int] = DEFAULT_MAX_DIM) -> MindChangeMap:
    return MindChangeEngine(tree, max_dim).labels(labeling)


def machine_mind_changes(tree: QueryTree, labeling: LeafLabeling, max_dim: Optional[int] = DEFAULT_MAX_DIM) -> int:
    """Label of the all-ones vertex: the most flips on any ascending path."""
    return mind_change_labels(tree, labeling, max_dim).top
