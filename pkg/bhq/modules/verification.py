"""
Verification runners for the three constructions: exhaustive over tiny worlds,
seeded random batches, or a single world file.

Random runs split into batches whose seeds are drawn from the run seed; batch
reports are merged in seed order, so the outcome does not depend on how many
workers ran them.
"""

import random
import logging
from concurrent.futures import ProcessPoolExecutor
from enum import Enum
from itertools import product
from pathlib import Path
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from ..core.config import VerificationConfig
from ..core.errors import InputError
from .bh_core import TelescopingChain
from .calculus import m_three, m_tree
from .finite_world import (
    FiniteWorld,
    OracleMachineSpec,
    TruthTableReduction,
    VerificationReport,
    all_telescoping_chains,
    bh_chain_from_tt,
    machine_from_bh_chain,
    tt_from_machine,
)
from .query_tree import LEAF, LeafLabeling, Node, QueryTree, Subtree
from .world_io import WorldFile, dump_world, world_document

# Set up logging
logger = logging.getLogger(__name__)

BatchCallback = Callable[[int], None]


class Direction(Enum):
    MACHINE_TO_TT = "machine-to-tt"
    TT_TO_BH = "tt-to-bh"
    BH_TO_MACHINE = "bh-to-machine"


# -- random generators ------------------------------------------------


def random_world(rng: random.Random, max_size: int = 6) -> FiniteWorld:
    return FiniteWorld(tuple(str(i) for i in range(rng.randint(1, max_size))))


def random_chain(rng: random.Random, universe: Sequence[str], length: int) -> TelescopingChain:
    universe = sorted(universe)
    return TelescopingChain.from_depths(universe, {x: rng.randint(0, length) for x in universe}, length)


def random_tree(
    rng: random.Random,
    max_level_sum: int = 13,
    max_leaves: int = 8,
    max_level: int = 4,
) -> QueryTree:
    """Random shape with at most max_leaves leaves and level sum at most max_level_sum."""
    if max_leaves < 2 or max_level_sum < 1:
        raise InputError("a random tree needs room for at least one node")
    nodes = rng.randint(1, min(max_leaves - 1, max_level_sum))
    levels = []
    budget = max_level_sum
    for i in range(nodes):
        reserve = nodes - i - 1
        levels.append(rng.randint(1, min(max_level, budget - reserve)))
        budget -= levels[-1]
    preorder = iter(levels)

    def shape(n: int) -> Subtree:
        if n == 0:
            return LEAF
        lvl = next(preorder)
        no_size = rng.randint(0, n - 1)
        no = shape(no_size)
        return Node(lvl, no, shape(n - 1 - no_size))

    return QueryTree(shape(nodes))


def random_machine(rng: random.Random, world: FiniteWorld, tree: QueryTree) -> OracleMachineSpec:
    """Node i queries <y, i> for a random y; its oracle is a random chain over the i-tagged tokens."""
    queries, chains = {}, {}
    for idx, (node_id, lvl) in enumerate(zip(tree.node_ids, tree.levels), start=1):
        queries[node_id] = {x: world.tag(rng.choice(world.universe), idx) for x in world.universe}
        chains[node_id] = random_chain(rng, world.tagged([idx]), lvl)
    labelings = {
        x: LeafLabeling.from_counter(rng.getrandbits(tree.leaf_count), tree.leaf_count)
        for x in world.universe
    }
    return OracleMachineSpec(tree, queries, chains, labelings)


def random_tt_reduction(rng: random.Random, world: FiniteWorld, arity: int) -> TruthTableReduction:
    """Inputs alternate between rejecting and accepting the all-"no" row."""
    queries, tables = {}, {}
    for i, x in enumerate(world.universe):
        queries[x] = tuple(rng.choice(world.universe) for _ in range(arity))
        rows = [rng.random() < 0.5 for _ in range(1 << arity)]
        rows[0] = i % 2 == 1
        tables[x] = tuple(rows)
    target = frozenset(y for y in world.universe if rng.random() < 0.5)
    return TruthTableReduction(arity, queries, tables, target)


# -- single-world checks ----------------------------------------------


def _machine_to_tt(
    world: FiniteWorld,
    spec: OracleMachineSpec,
    max_dim: Optional[int] = None,
) -> Tuple[TruthTableReduction, VerificationReport]:
    reduction, report = tt_from_machine(world, spec, max_dim)
    m = m_tree(spec.tree)
    arity_ok = reduction.arity == m and all(len(q) == m for q in reduction.queries.values())
    report.record(arity_ok, f"reduction uses {reduction.arity} queries, expected m={m}")
    return reduction, report


def verify_machine_to_tt(world: FiniteWorld, spec: OracleMachineSpec, max_dim: Optional[int] = None) -> VerificationReport:
    return _machine_to_tt(world, spec, max_dim)[1]


def verify_tt_to_bh(world: FiniteWorld, reduction: TruthTableReduction) -> VerificationReport:
    _, _, report = bh_chain_from_tt(world, reduction)
    return report


def verify_bh_to_machine(
    j: int,
    k: int,
    world: FiniteWorld,
    chain: TelescopingChain,
    l: Optional[int] = None,
) -> VerificationReport:
    _, report = machine_from_bh_chain(j, k, world, chain, l)
    return report


def verify_world_file(
    direction: Direction,
    loaded: WorldFile,
    j: Optional[int] = None,
    k: Optional[int] = None,
    l: Optional[int] = None,
    max_dim: Optional[int] = None,
    save_to: Optional[Path] = None,
) -> VerificationReport:
    """Run one construction on a loaded world; save_to receives the world with its input and result."""
    world = loaded.world
    if direction is Direction.MACHINE_TO_TT:
        if loaded.machine is None:
            raise InputError("machine-to-tt needs a \"machine\" in the world file")
        reduction, report = _machine_to_tt(world, loaded.machine, max_dim)
        parts = {"machine": loaded.machine, "reduction": reduction}
    elif direction is Direction.TT_TO_BH:
        if loaded.reduction is None:
            raise InputError("tt-to-bh needs a \"reduction\" in the world file")
        chain, _, report = bh_chain_from_tt(world, loaded.reduction)
        parts = {"chain": chain, "reduction": loaded.reduction}
    else:
        if loaded.chain is None:
            raise InputError("bh-to-machine needs a \"chain\" in the world file")
        if j is None or k is None:
            raise InputError("bh-to-machine needs --j and --k")
        machine, report = machine_from_bh_chain(j, k, world, loaded.chain, l)
        parts = {"machine": machine, "chain": loaded.chain}

    if save_to is not None:
        dump_world(save_to, world_document(world, **parts))
    return report


# -- random runs ------------------------------------------------------

_TWO_LEVEL_SMALL = [(j, k) for j in range(1, 7) for k in range(1, 4) if j + 2 * k <= 8]

# machine-to-tt runs add this many general-tree cases unless told otherwise
GENERAL_TREE_CASES = VerificationConfig().general_tree_cases
# general-tree batch seeds come from the run seed xor this value
_GENERAL_SEED_STREAM = 0x5EED6E4E

TWO_LEVEL_KIND = "two-level trees"
GENERAL_KIND = "general trees"


def _machine_to_tt_case(rng: random.Random, max_dim: Optional[int]) -> VerificationReport:
    world = random_world(rng)
    tree = QueryTree.two_level(*rng.choice(_TWO_LEVEL_SMALL))
    return verify_machine_to_tt(world, random_machine(rng, world, tree), max_dim)


def _general_tree_case(rng: random.Random, max_dim: Optional[int]) -> VerificationReport:
    world = random_world(rng)
    tree = random_tree(rng, max_level_sum=8, max_leaves=5)
    return verify_machine_to_tt(world, random_machine(rng, world, tree), max_dim)


def _tt_to_bh_case(rng: random.Random, max_dim: Optional[int]) -> VerificationReport:
    world = random_world(rng)
    return verify_tt_to_bh(world, random_tt_reduction(rng, world, rng.randint(1, 4)))


def _bh_to_machine_case(rng: random.Random, max_dim: Optional[int]) -> VerificationReport:
    world = random_world(rng)
    j, k = rng.randint(1, 4), rng.randint(1, 3)
    l = rng.randint(1, 3) if rng.random() < 1 / 3 else k
    chain = random_chain(rng, world.universe, m_three(j, k, l))
    return verify_bh_to_machine(j, k, world, chain, l)


_RANDOM_CASES: Dict[Direction, Callable[[random.Random, Optional[int]], VerificationReport]] = {
    Direction.MACHINE_TO_TT: _machine_to_tt_case,
    Direction.TT_TO_BH: _tt_to_bh_case,
    Direction.BH_TO_MACHINE: _bh_to_machine_case,
}


def batch_seeds(seed: int, batches: int) -> List[int]:
    rng = random.Random(seed)
    return [rng.getrandbits(32) for _ in range(batches)]


def general_tree_count(direction: Direction, general_cases: Optional[int] = None) -> int:
    """General-tree cases a random run adds on top of its main cases."""
    if direction is not Direction.MACHINE_TO_TT:
        return 0
    return GENERAL_TREE_CASES if general_cases is None else general_cases


def run_batch(
    direction: Direction,
    batch_seed: int,
    cases: int,
    max_dim: Optional[int] = None,
    general: bool = False,
) -> VerificationReport:
    """One seeded batch; every case counts as one check."""
    rng = random.Random(batch_seed)
    report = VerificationReport(direction.value, seed=batch_seed)
    case = _general_tree_case if general else _RANDOM_CASES[direction]
    for i in range(cases):
        result = case(rng, max_dim)
        report.record(result.ok, f"batch seed {batch_seed}, case {i}: {'; '.join(result.failures)}")
    if direction is Direction.MACHINE_TO_TT:
        report.counts[GENERAL_KIND if general else TWO_LEVEL_KIND] = cases
    return report


def _split(cases: int, batch_size: int) -> List[int]:
    return [min(batch_size, cases - start) for start in range(0, cases, batch_size)]


def run_random(
    direction: Direction,
    cases: int,
    seed: int,
    batch_size: int = 100,
    workers: int = 1,
    max_dim: Optional[int] = None,
    on_batch: Optional[BatchCallback] = None,
    general_cases: Optional[int] = None,
) -> VerificationReport:
    """cases seeded cases, plus a separately seeded general-tree run for machine-to-tt."""
    if cases < 1:
        raise InputError(f"--random needs at least one case, got {cases}")
    if general_cases is not None and general_cases < 0:
        raise InputError(f"general-tree case count must be non-negative, got {general_cases}")
    if general_cases and direction is not Direction.MACHINE_TO_TT:
        raise InputError(f"{direction.value} has no general-tree cases")
    general_cases = general_tree_count(direction, general_cases)

    sizes = _split(cases, batch_size)
    general_sizes = _split(general_cases, batch_size)
    tasks = [(s, n, False) for s, n in zip(batch_seeds(seed, len(sizes)), sizes)]
    tasks += [
        (s, n, True)
        for s, n in zip(batch_seeds(seed ^ _GENERAL_SEED_STREAM, len(general_sizes)), general_sizes)
    ]
    report = VerificationReport(direction.value, seed=seed)
    logger.debug(
        "%s: %d random cases and %d general-tree cases in %d batches, seed %d",
        direction.value, cases, general_cases, len(tasks), seed,
    )

    if workers <= 1:
        batches: Iterator[VerificationReport] = (
            run_batch(direction, s, n, max_dim, general) for s, n, general in tasks
        )
        for batch in batches:
            report.merge(batch)
            if on_batch:
                on_batch(batch.checked)
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [executor.submit(run_batch, direction, s, n, max_dim, general) for s, n, general in tasks]
            for future in futures:
                batch = future.result()
                report.merge(batch)
                if on_batch:
                    on_batch(batch.checked)

    logger.info("%s: %d checked, %d failure(s), seed %d", direction.value, report.checked, len(report.failures), seed)
    return report


# -- exhaustive runs --------------------------------------------------


def exhaustive_bh_to_machine(
    max_universe: int = 3,
    max_m: int = 5,
    on_batch: Optional[BatchCallback] = None,
) -> VerificationReport:
    """Every telescoping chain over a max_universe-element world, for every shape with m <= max_m."""
    world = FiniteWorld(tuple(str(i) for i in range(max_universe)))
    report = VerificationReport(Direction.BH_TO_MACHINE.value)
    for j, k, l in product(range(1, max_m + 1), repeat=3):
        m = m_three(j, k, l)
        if m > max_m:
            continue
        shape = VerificationReport(f"j={j} k={k} l={l}")
        for chain in all_telescoping_chains(world.universe, m):
            shape.merge(verify_bh_to_machine(j, k, world, chain, l))
        report.merge(shape)
        if on_batch:
            on_batch(shape.checked)
    return report


def _depth_world(tree: QueryTree) -> Tuple[FiniteWorld, Dict[str, Dict[str, str]], Dict[str, TelescopingChain]]:
    """One input per combination of chain depths; node i's oracle puts <x, i> at x's i-th depth."""
    combos = list(product(*(range(lvl + 1) for lvl in tree.levels)))
    world = FiniteWorld(tuple("d" + "-".join(map(str, c)) for c in combos))
    queries, chains = {}, {}
    for idx, (node_id, lvl) in enumerate(zip(tree.node_ids, tree.levels), start=1):
        queries[node_id] = {x: world.tag(x, idx) for x in world.universe}
        depths = {world.tag(x, idx): c[idx - 1] for x, c in zip(world.universe, combos)}
        chains[node_id] = TelescopingChain.from_depths(world.tagged([idx]), depths, lvl)
    return world, queries, chains


def exhaustive_machine_to_tt(
    max_m: int = 5,
    max_dim: Optional[int] = None,
    on_batch: Optional[BatchCallback] = None,
) -> VerificationReport:
    """Every labeling of every two-level tree with m <= max_m, on every reachable true-answer vertex."""
    report = VerificationReport(Direction.MACHINE_TO_TT.value)
    for j, k in product(range(1, max_m + 1), repeat=2):
        tree = QueryTree.two_level(j, k)
        if m_tree(tree) > max_m:
            continue
        world, queries, chains = _depth_world(tree)
        shape = VerificationReport(f"j={j} k={k}")
        for counter in range(1 << tree.leaf_count):
            labeling = LeafLabeling.from_counter(counter, tree.leaf_count)
            spec = OracleMachineSpec(tree, queries, chains, {x: labeling for x in world.universe})
            shape.merge(verify_machine_to_tt(world, spec, max_dim))
        report.merge(shape)
        if on_batch:
            on_batch(shape.checked)
    return report


def exhaustive_tt_to_bh(max_arity: int = 3, on_batch: Optional[BatchCallback] = None) -> VerificationReport:
    """Every predicate table of each arity, under every target set over the query tokens."""
    report = VerificationReport(Direction.TT_TO_BH.value)
    for arity in range(1, max_arity + 1):
        query_tokens = tuple(f"q{i}" for i in range(1, arity + 1))
        inputs = tuple(f"t{t}" for t in range(1 << (1 << arity)))
        world = FiniteWorld(query_tokens + inputs)
        queries = {x: query_tokens for x in world.universe}
        tables = {q: (False,) * (1 << arity) for q in query_tokens}
        for t, x in enumerate(inputs):
            tables[x] = tuple(bool((t >> row) & 1) for row in range(1 << arity))
        batch = VerificationReport(f"arity={arity}")
        for mask in range(1 << arity):
            target = frozenset(q for i, q in enumerate(query_tokens) if (mask >> i) & 1)
            batch.merge(verify_tt_to_bh(world, TruthTableReduction(arity, queries, tables, target)))
        report.merge(batch)
        if on_batch:
            on_batch(batch.checked)
    return report


def run_exhaustive(
    direction: Direction,
    max_universe: int = 3,
    max_m: int = 5,
    max_dim: Optional[int] = None,
    on_batch: Optional[BatchCallback] = None,
    max_arity: int = 3,
) -> VerificationReport:
    """max_m bounds bh-to-machine and machine-to-tt; tt-to-bh runs every arity up to max_arity."""
    if direction is Direction.BH_TO_MACHINE:
        report = exhaustive_bh_to_machine(max_universe, max_m, on_batch)
    elif direction is Direction.MACHINE_TO_TT:
        report = exhaustive_machine_to_tt(max_m, max_dim, on_batch)
    else:
        logger.debug("tt-to-bh exhaustive: arities 1..%d", max_arity)
        report = exhaustive_tt_to_bh(max_arity, on_batch)
    logger.info("%s exhaustive: %d checked, %d failure(s)", direction.value, report.checked, len(report.failures))
    return report
