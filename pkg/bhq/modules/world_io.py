"""
World files: a universe plus an optional machine, BH chain and truth-table reduction.

{"universe": [...],
 "machine": {"tree": "(1 leaf leaf)" | {...}, "queries": {node: {x: y}},
             "chains": {node: [[...], ...]}, "labelings": {x: "RA" | [...]}},
 "chain": [[...], ...],
 "reduction": {"arity": m, "queries": {x: [...]}, "tables": {x: "0110"}, "target": [...]}}
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field, ValidationError

from ..core.errors import InputError
from .bh_core import TelescopingChain
from .finite_world import FiniteWorld, OracleMachineSpec, TruthTableReduction
from .query_tree import LeafLabeling, QueryTree, load_tree

# Set up logging
logger = logging.getLogger(__name__)


class MachineDocument(BaseModel):
    tree: Union[str, Dict[str, Any]]
    queries: Dict[str, Dict[str, str]]
    chains: Dict[str, List[List[str]]]
    labelings: Dict[str, Union[str, List[Union[bool, int, str]]]]


class ReductionDocument(BaseModel):
    arity: int = Field(ge=1)
    queries: Dict[str, List[str]]
    tables: Dict[str, str] = Field(description="Predicate rows as 0/1 characters, row index = answer bits")
    target: List[str] = Field(default_factory=list)


class WorldDocument(BaseModel):
    universe: List[str]
    machine: Optional[MachineDocument] = None
    chain: Optional[List[List[str]]] = None
    reduction: Optional[ReductionDocument] = None


@dataclass
class WorldFile:
    world: FiniteWorld
    machine: Optional[OracleMachineSpec] = None
    chain: Optional[TelescopingChain] = None
    reduction: Optional[TruthTableReduction] = None


def _node_universe(world: FiniteWorld, images: Dict[str, str], sets: List[List[str]]) -> frozenset:
    """Base universe plus every well-formed tagged token the node mentions."""
    mentioned = set(images.values()).union(*map(set, sets))
    return frozenset(world.universe) | {t for t in mentioned if world.contains(t)}


def _machine(world: FiniteWorld, doc: MachineDocument) -> OracleMachineSpec:
    tree = load_tree(doc.tree) if isinstance(doc.tree, str) else QueryTree.from_json(doc.tree)
    chains = {}
    for node_id, sets in doc.chains.items():
        images = doc.queries.get(node_id, {})
        chains[node_id] = TelescopingChain(_node_universe(world, images, sets), tuple(frozenset(s) for s in sets))
    labelings = {
        x: LeafLabeling.from_text(lab) if isinstance(lab, str) else LeafLabeling.from_symbols(lab)
        for x, lab in doc.labelings.items()
    }
    spec = OracleMachineSpec(tree, {k: dict(v) for k, v in doc.queries.items()}, chains, labelings)
    spec.validate(world)
    return spec


def _reduction(world: FiniteWorld, doc: ReductionDocument) -> TruthTableReduction:
    tables = {}
    for x, row_text in doc.tables.items():
        if set(row_text) - {"0", "1"}:
            raise InputError(f"predicate table of {x!r} must consist of 0/1 characters")
        tables[x] = tuple(c == "1" for c in row_text)
    reduction = TruthTableReduction(
        arity=doc.arity,
        queries={x: tuple(q) for x, q in doc.queries.items()},
        tables=tables,
        target=frozenset(doc.target),
    )
    reduction.validate(world)
    return reduction


def parse_world(text: str) -> WorldFile:
    try:
        doc = WorldDocument.model_validate_json(text)
    except ValidationError as e:
        raise InputError(f"invalid world file: {e}") from None

    world = FiniteWorld(tuple(doc.universe))
    loaded = WorldFile(world)
    if doc.machine is not None:
        loaded.machine = _machine(world, doc.machine)
    if doc.chain is not None:
        loaded.chain = TelescopingChain.build(world.universe, doc.chain)
    if doc.reduction is not None:
        loaded.reduction = _reduction(world, doc.reduction)
    logger.debug(
        "world of %d elements: machine=%s chain=%s reduction=%s",
        len(world.universe), loaded.machine is not None, loaded.chain is not None, loaded.reduction is not None,
    )
    return loaded


def load_world(path: Path) -> WorldFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read world file {path}: {e}") from None
    return parse_world(text)


def world_document(
    world: FiniteWorld,
    machine: Optional[OracleMachineSpec] = None,
    chain: Optional[TelescopingChain] = None,
    reduction: Optional[TruthTableReduction] = None,
) -> WorldDocument:
    """Document form of a world and any of its machine, chain and reduction."""
    doc = WorldDocument(universe=list(world.universe))
    if machine is not None:
        doc.machine = MachineDocument(
            tree=machine.tree.render(),
            queries=machine.queries,
            chains={n: [sorted(s) for s in c.sets] for n, c in machine.chains.items()},
            labelings={x: lab.render() for x, lab in machine.labelings.items()},
        )
    if chain is not None:
        doc.chain = [sorted(s) for s in chain.sets]
    if reduction is not None:
        doc.reduction = ReductionDocument(
            arity=reduction.arity,
            queries={x: list(q) for x, q in reduction.queries.items()},
            tables={x: "".join("1" if b else "0" for b in t) for x, t in reduction.tables.items()},
            target=sorted(reduction.target),
        )
    return doc


def dump_world(path: Path, doc: WorldDocument) -> Path:
    """Write doc as indented JSON that load_world reads back."""
    path = Path(path)
    try:
        path.write_text(doc.model_dump_json(indent=2, exclude_none=True), encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot write world file {path}: {e}") from None
    logger.info("world written to %s", path)
    return path
