"""
Finite-world execution of query-tree machines and of the reductions between
machines, bounded truth-table reductions and boolean-hierarchy chains.

Over a finite universe every subset counts as an NP set, so the constructions
can be run and their languages compared element by element. Tagged elements
<y, t> are written "y#t".
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import InputError
from .bh_core import TelescopingChain, chain_member, level as check_level, validate_chain
from .calculus import m_three, m_tree
from .hypercube import DEFAULT_MAX_DIM, MindChangeEngine, MindChangeMap, Vertex, mind_change_dp
from .query_tree import LeafLabeling, QueryTree

# Set up logging
logger = logging.getLogger(__name__)

TAG_SEPARATOR = "#"


@dataclass(frozen=True)
class FiniteWorld:
    """An ordered universe of opaque tokens."""
    universe: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "universe", tuple(self.universe))
        if not self.universe:
            raise InputError("a world needs a non-empty universe")
        if len(set(self.universe)) != len(self.universe):
            raise InputError("universe tokens must be distinct")
        for token in self.universe:
            if not isinstance(token, str) or not token:
                raise InputError(f"universe tokens must be non-empty strings, got {token!r}")
            if TAG_SEPARATOR in token:
                raise InputError(f"universe token {token!r} must not contain {TAG_SEPARATOR!r}")

    @staticmethod
    def tag(y: str, t: int) -> str:
        return f"{y}{TAG_SEPARATOR}{t}"

    @staticmethod
    def untag(token: str) -> Tuple[str, Optional[int]]:
        base, sep, tag = token.partition(TAG_SEPARATOR)
        if not sep:
            return token, None
        if not tag.isdigit():
            raise InputError(f"tagged token {token!r} needs an integer tag")
        return base, int(tag)

    def contains(self, token: str) -> bool:
        try:
            base, tag = self.untag(token)
        except InputError:
            return False
        return base in self.universe and (tag is None or tag >= 1)

    def tagged(self, tags: Iterable[int]) -> FrozenSet[str]:
        tags = tuple(tags)
        return frozenset(self.tag(y, t) for y in self.universe for t in tags)

    def language(self, members: Iterable[str]) -> "FiniteLanguage":
        return FiniteLanguage(self.universe, frozenset(members))


@dataclass(frozen=True)
class FiniteLanguage:
    universe: Tuple[str, ...]
    members: FrozenSet[str]

    def __post_init__(self):
        outside = set(self.members) - set(self.universe)
        if outside:
            raise InputError(f"language members outside the universe: {sorted(outside)}")

    def __contains__(self, x: str) -> bool:
        return x in self.members


@dataclass(frozen=True)
class EquivalenceReport:
    equal: bool
    only_left: Tuple[str, ...]
    only_right: Tuple[str, ...]

    @property
    def differences(self) -> Tuple[str, ...]:
        return tuple(sorted(self.only_left + self.only_right))


def verify_equivalence(l1: FiniteLanguage, l2: FiniteLanguage) -> EquivalenceReport:
    if set(l1.universe) != set(l2.universe):
        raise InputError("languages live over different universes")
    only_left = tuple(sorted(l1.members - l2.members))
    only_right = tuple(sorted(l2.members - l1.members))
    return EquivalenceReport(not only_left and not only_right, only_left, only_right)


@dataclass
class VerificationReport:
    """Outcome of a batch of constructive checks; counts splits checked cases by kind."""
    name: str
    checked: int = 0
    failures: List[str] = field(default_factory=list)
    seed: Optional[int] = None
    counts: Dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, passed: bool, message: str) -> None:
        self.checked += 1
        if not passed:
            self.failures.append(message)

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        self.checked += other.checked
        self.failures.extend(other.failures)
        for kind, n in other.counts.items():
            self.counts[kind] = self.counts.get(kind, 0) + n
        return self

    def lines(self) -> List[str]:
        status = "OK" if self.ok else "FAIL"
        seed = "" if self.seed is None else f" seed={self.seed}"
        lines = [f"{status} {self.name}: checked={self.checked} failures={len(self.failures)}{seed}"]
        lines.extend(f"  {kind}: checked={n}" for kind, n in self.counts.items())
        lines.extend(f"  failure: {f}" for f in self.failures)
        return lines

    def summary(self) -> Dict[str, object]:
        summary: Dict[str, object] = {"checked": self.checked, "failures": list(self.failures), "seed": self.seed}
        if self.counts:
            summary["counts"] = dict(self.counts)
        return summary


@dataclass
class OracleMachineSpec:
    """A query-tree machine made concrete over a finite world.

    queries and chains are keyed by node id (v1..vN); labelings by input.
    Query functions are total so every node's true answer is defined, asked or not.
    """
    tree: QueryTree
    queries: Dict[str, Dict[str, str]]
    chains: Dict[str, TelescopingChain]
    labelings: Dict[str, LeafLabeling]

    def validate(self, world: FiniteWorld) -> None:
        for node_id, lvl in zip(self.tree.node_ids, self.tree.levels):
            if node_id not in self.queries or node_id not in self.chains:
                raise InputError(f"node {node_id} needs a query function and a chain")
            chain = self.chains[node_id]
            if chain.length != lvl:
                raise InputError(f"node {node_id} is BH_{lvl} but its chain has {chain.length} sets")
            violation = validate_chain(chain)
            if violation is not None:
                raise InputError(f"chain of node {node_id}: {violation}")
            query = self.queries[node_id]
            for x in world.universe:
                if x not in query:
                    raise InputError(f"query function of node {node_id} is undefined on {x!r}")
                self._check_image(world, node_id, query[x])
        for x in world.universe:
            if x not in self.labelings:
                raise InputError(f"no leaf labeling for input {x!r}")
            self.labelings[x].check_for(self.tree)

    def _check_image(self, world: FiniteWorld, node_id: str, y: str) -> None:
        if not world.contains(y) or y not in self.chains[node_id].universe:
            raise InputError(f"node {node_id} queries {y!r}, outside the universe")

    def answer(self, world: FiniteWorld, node_index: int, x: str) -> bool:
        node_id = self.tree.node_ids[node_index]
        y = self.queries[node_id][x]
        self._check_image(world, node_id, y)
        return chain_member(self.chains[node_id], y)

    def true_vertex(self, x: str) -> Vertex:
        """Answer vector of every node's query, in cube order."""
        v = 0
        start = 0
        for node_id, lvl in zip(self.tree.node_ids, self.tree.levels):
            bits = self.chains[node_id].membership_bits(self.queries[node_id][x]).bits
            for i, bit in enumerate(bits):
                if bit:
                    v |= 1 << (start + i)
            start += lvl
        return v


def run_machine(world: FiniteWorld, spec: OracleMachineSpec, x: str) -> bool:
    if x not in world.universe:
        raise InputError(f"input {x!r} is outside the universe")
    leaf = spec.tree.walk(lambda idx: spec.answer(world, idx, x))
    return spec.labelings[x].accepts[leaf]


def language_of(world: FiniteWorld, spec: OracleMachineSpec) -> FiniteLanguage:
    spec.validate(world)
    return world.language(x for x in world.universe if run_machine(world, spec, x))


class MachineCubes:
    """Mind-change maps of a machine's inputs, shared between inputs with equal labelings."""

    def __init__(self, spec: OracleMachineSpec, max_dim: Optional[int] = DEFAULT_MAX_DIM):
        self.spec = spec
        self.engine = MindChangeEngine(spec.tree, max_dim)
        self._maps: Dict[LeafLabeling, MindChangeMap] = {}

    def labels(self, x: str) -> MindChangeMap:
        labeling = self.spec.labelings[x]
        if labeling not in self._maps:
            self._maps[labeling] = self.engine.labels(labeling)
        return self._maps[labeling]

    def true_label(self, x: str) -> int:
        return self.labels(x)[self.spec.true_vertex(x)]

    def origin_accepts(self, x: str) -> bool:
        return bool(self.spec.labelings[x].accepts[self.engine.leaf_of[0]])


def q_membership(
    world: FiniteWorld,
    spec: OracleMachineSpec,
    x: str,
    n: int,
    max_dim: Optional[int] = DEFAULT_MAX_DIM,
    cubes: Optional[MachineCubes] = None,
) -> bool:
    """<x, n> in Q: M(x) has at least n mind changes at its true-answer vertex."""
    if x not in world.universe:
        raise InputError(f"input {x!r} is outside the universe")
    if n <= 0:
        return True
    cubes = cubes or MachineCubes(spec, max_dim)
    return cubes.true_label(x) >= n


@dataclass
class TruthTableReduction:
    """x ↦ (y_1..y_m) and a table α_x; row index is sum of z_l << (l-1)."""
    arity: int
    queries: Dict[str, Tuple[str, ...]]
    tables: Dict[str, Tuple[bool, ...]]
    target: FrozenSet[str]

    def validate(self, world: FiniteWorld) -> None:
        check_level(self.arity, "arity")
        for x in world.universe:
            if x not in self.queries or x not in self.tables:
                raise InputError(f"reduction is undefined on {x!r}")
            if len(self.queries[x]) != self.arity:
                raise InputError(f"input {x!r} has {len(self.queries[x])} queries, arity is {self.arity}")
            if len(self.tables[x]) != 1 << self.arity:
                raise InputError(f"predicate table of {x!r} needs {1 << self.arity} rows")
            for y in self.queries[x]:
                if not world.contains(y):
                    raise InputError(f"input {x!r} queries {y!r}, outside the universe")
        outside = [y for y in self.target if not world.contains(y)]
        if outside:
            raise InputError(f"target set has tokens outside the universe: {sorted(outside)}")

    def row(self, x: str) -> int:
        return sum(1 << i for i, y in enumerate(self.queries[x]) if y in self.target)

    def polarity(self, x: str) -> int:
        """o(x): 1 when the reduction accepts on all-"no" answers."""
        return int(self.tables[x][0])


def language_of_tt(world: FiniteWorld, red: TruthTableReduction) -> FiniteLanguage:
    red.validate(world)
    return world.language(x for x in world.universe if red.tables[x][red.row(x)])


def _report_languages(report: VerificationReport, expected: FiniteLanguage, actual: FiniteLanguage, what: str) -> None:
    equivalence = verify_equivalence(expected, actual)
    report.record(
        equivalence.equal,
        f"{what}: languages differ on {', '.join(equivalence.differences)}",
    )


def tt_from_machine(
    world: FiniteWorld,
    spec: OracleMachineSpec,
    max_dim: Optional[int] = DEFAULT_MAX_DIM,
) -> Tuple[TruthTableReduction, VerificationReport]:
    """m-tt reduction to Q = {<x, l> : M(x) has at least l mind changes}, m = m(T)."""
    spec.validate(world)
    m = m_tree(spec.tree)
    cubes = MachineCubes(spec, max_dim)
    report = VerificationReport("machine-to-tt")

    target = set()
    queries: Dict[str, Tuple[str, ...]] = {}
    tables: Dict[str, Tuple[bool, ...]] = {}
    for x in world.universe:
        label = cubes.true_label(x)
        report.record(label <= m, f"input {x}: {label} mind changes exceed m={m}")
        target.update(world.tag(x, l) for l in range(1, min(label, m) + 1))
        queries[x] = tuple(world.tag(x, l) for l in range(1, m + 1))
        o = int(cubes.origin_accepts(x))
        tables[x] = tuple((row.bit_length() + o) % 2 == 1 for row in range(1 << m))

    reduction = TruthTableReduction(m, queries, tables, frozenset(target))
    _report_languages(report, language_of(world, spec), language_of_tt(world, reduction), f"{m}-tt reduction")
    logger.info("machine-to-tt: m=%d, |Q|=%d, %d failure(s)", m, len(target), len(report.failures))
    return reduction, report


def bh_chain_from_tt(
    world: FiniteWorld,
    red: TruthTableReduction,
) -> Tuple[TelescopingChain, Dict[str, int], VerificationReport]:
    """B_i = {x : some vertex with label i has all its yes-claims in the target}.

    x is in L iff x is in the nested difference of the B_i (o(x) = 0) or is
    not in it (o(x) = 1).
    """
    red.validate(world)
    for x in world.universe:
        for y in red.queries[x]:
            if y not in world.universe:
                raise InputError(f"input {x!r} queries tagged token {y!r}; the chain needs base queries")
    m = red.arity
    report = VerificationReport("tt-to-bh")

    members: List[set] = [set() for _ in range(m)]
    for x in world.universe:
        labels = mind_change_dp(np.array(red.tables[x], dtype=bool))
        allowed = red.row(x)
        claims = np.arange(1 << m)
        reachable = labels[(claims & ~allowed) == 0]
        for i in set(int(v) for v in reachable):
            if i >= 1:
                members[i - 1].add(x)

    chain = TelescopingChain(frozenset(world.universe), tuple(frozenset(s) for s in members))
    violation = validate_chain(chain)
    report.record(violation is None, f"B-chain is not telescoping: {violation}")
    polarity = {x: red.polarity(x) for x in world.universe}
    if violation is None:
        language = language_of_tt(world, red)
        for x in world.universe:
            inside = chain_member(chain, x)
            predicted = inside if polarity[x] == 0 else not inside
            report.record(
                predicted == (x in language),
                f"input {x}: o={polarity[x]}, chain says {inside}, reduction says {x in language}",
            )
    return chain, polarity, report


def _tag_chain(
    world: FiniteWorld,
    parts: Sequence[Tuple[int, Sequence[Optional[FrozenSet[str]]]]],
    length: int,
) -> TelescopingChain:
    """Chain over tagged tokens whose i-th set is the union over (tag, sets) of {<y, tag> : y in sets[i]}."""
    sets = []
    for i in range(length):
        current = set()
        for tag, tag_sets in parts:
            if i < len(tag_sets) and tag_sets[i] is not None:
                current.update(world.tag(y, tag) for y in tag_sets[i])
        sets.append(frozenset(current))
    return TelescopingChain(world.tagged(tag for tag, _ in parts), tuple(sets))


def machine_from_bh_chain(
    j: int,
    k: int,
    world: FiniteWorld,
    chain: TelescopingChain,
    l: Optional[int] = None,
) -> Tuple[OracleMachineSpec, VerificationReport]:
    """Machine with query structure (j (k leaf leaf) (l leaf leaf)) accepting the chain's language.

    j odd:  O_1 = B_{k+1..k+j},          no-branch B_{1..k}, yes-branch B_{j+k+1..j+k+l}
    j even: O_1 = B_{k+1..k+j-1}, B_m,   no-branch B_{1..k}, yes-branch B_{j+k..m-1}
    Short sets lists are padded with empty sets. With l = k one oracle serves both
    second queries, on <x,2> and <x,3>. Accept iff the second answer is yes (k odd)
    or exactly one answer is yes (k even).
    """
    j = check_level(j, "j")
    k = check_level(k, "k")
    l = k if l is None else check_level(l, "l")
    m = m_three(j, k, l)
    if chain.length != m:
        raise InputError(f"chain must have length m={m} for j={j}, k={k}, l={l}; got {chain.length}")
    violation = validate_chain(chain)
    if violation is not None:
        raise InputError(f"invalid chain: {violation}")
    if chain.universe != frozenset(world.universe):
        raise InputError("chain and world have different universes")

    def b(i: int) -> FrozenSet[str]:
        return chain.sets[i - 1]

    if j % 2 == 1:
        first = [b(i) for i in range(k + 1, k + j + 1)]
        yes_sets = [b(i) for i in range(j + k + 1, j + k + l + 1)]
    else:
        first = [b(i) for i in range(k + 1, k + j)] + [b(m)]
        yes_sets = [b(i) for i in range(j + k, m)]
    no_sets = [b(i) for i in range(1, k + 1)]

    tree = QueryTree.three_oracle(j, k, l)
    v1, v2, v3 = tree.node_ids
    o1 = TelescopingChain(frozenset(world.universe), tuple(first))
    if k == l:
        o2 = _tag_chain(world, [(2, no_sets), (3, yes_sets)], k)
        chains = {v1: o1, v2: o2, v3: o2}
    else:
        chains = {v1: o1, v2: _tag_chain(world, [(2, no_sets)], k), v3: _tag_chain(world, [(3, yes_sets)], l)}

    scheme = LeafLabeling.scheme(3 if k % 2 == 1 else 1)
    spec = OracleMachineSpec(
        tree=tree,
        queries={
            v1: {x: x for x in world.universe},
            v2: {x: world.tag(x, 2) for x in world.universe},
            v3: {x: world.tag(x, 3) for x in world.universe},
        },
        chains=chains,
        labelings={x: scheme for x in world.universe},
    )

    report = VerificationReport("bh-to-machine")
    _report_languages(
        report,
        chain_language(world, chain),
        language_of(world, spec),
        f"j={j} k={k} l={l} chain {[sorted(s) for s in chain.sets]}",
    )
    return spec, report


def chain_language(world: FiniteWorld, chain: TelescopingChain) -> FiniteLanguage:
    return world.language(x for x in world.universe if chain_member(chain, x))


def all_telescoping_chains(universe: Sequence[str], length: int) -> Iterable[TelescopingChain]:
    """Every telescoping chain of the given length: one depth in 0..length per element."""
    universe = tuple(universe)
    depths = [0] * len(universe)
    while True:
        yield TelescopingChain.from_depths(universe, dict(zip(universe, depths)), length)
        for i in range(len(depths)):
            if depths[i] < length:
                depths[i] += 1
                break
            depths[i] = 0
        else:
            return


