"""
Graphviz DOT rendering of query trees and their labeled answer hypercubes.
"""

import logging
from typing import Any, Dict, List, Optional

from jinja2 import Environment, PackageLoader, StrictUndefined

from ..core.errors import ResourceError
from .hypercube import MindChangeEngine, vertex_bits
from .query_tree import LeafLabeling, QueryTree

# Set up logging
logger = logging.getLogger(__name__)

_environment = Environment(
    loader=PackageLoader("bhq", "templates"),
    trim_blocks=True,
    lstrip_blocks=True,
    undefined=StrictUndefined,
    keep_trailing_newline=True,
)


def _ref_name(tree: QueryTree, ref: int) -> str:
    return tree.node_ids[ref] if ref >= 0 else f"leaf{-1 - ref}"


def tree_to_dot(tree: QueryTree, labeling: Optional[LeafLabeling] = None) -> str:
    if labeling is not None:
        labeling.check_for(tree)
    nodes = [{"id": node_id, "level": lvl} for node_id, lvl in zip(tree.node_ids, tree.levels)]
    leaves = []
    for i in range(tree.leaf_count):
        outcome = labeling.outcome(i).value if labeling is not None else None
        leaves.append({"index": i, "label": f"leaf {i}" + (f": {outcome}" if outcome else ""), "outcome": outcome})
    edges = [
        {"source": tree.node_ids[idx], "target": _ref_name(tree, ref), "label": "yes" if answer else "no"}
        for idx, answer, ref in tree.edges()
    ]
    return _environment.get_template("query_tree.dot.j2").render(nodes=nodes, leaves=leaves, edges=edges)


def hypercube_to_dot(
    tree: QueryTree,
    labeling: Optional[LeafLabeling] = None,
    max_dim: int = 6,
) -> str:
    """Covering graph of the answer cube; with a labeling, vertices carry outcomes and mind-change labels."""
    if tree.dimension > max_dim:
        raise ResourceError("DOT dimension", max_dim, tree.dimension)
    engine = MindChangeEngine(tree, max_dim)
    cube = engine.cube

    def name(v: int) -> str:
        return "".join(str(b) for b in vertex_bits(v, cube.dimension))

    outcomes = labels = None
    if labeling is not None:
        labeling.check_for(tree)
        outcomes = engine.outcomes(labeling.accepts)
        labels = engine.labels(labeling)

    vertices: List[Dict[str, Any]] = []
    edges: List[Dict[str, Any]] = []
    for v in range(cube.size):
        vertices.append({
            "name": name(v),
            "label": labels[v] if labels is not None else None,
            "outcome": ("A" if outcomes[v] else "R") if outcomes is not None else None,
        })
        for b in range(cube.dimension):
            if not (v >> b) & 1:
                w = v | (1 << b)
                flip = outcomes is not None and bool(outcomes[v] != outcomes[w])
                edges.append({"source": name(v), "target": name(w), "flip": flip})
    logger.debug("hypercube DOT: %d vertices, %d edges", len(vertices), len(edges))
    return _environment.get_template("hypercube.dot.j2").render(vertices=vertices, edges=edges)
