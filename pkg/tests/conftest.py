"""
Shared fixtures for the bhq test suite.
"""

import json

import pytest

from bhq.modules.query_tree import LeafLabeling, QueryTree, parse_tree

MIXED_TREE = "(2 (2 leaf leaf) (4 (1 leaf leaf) (3 leaf leaf)))"

# Every two-level (j, k) tree of dimension at most 12.
TWO_LEVEL_RANGE = [(j, k) for j in range(1, 11) for k in range(1, 6) if j + 2 * k <= 12]


@pytest.fixture
def mixed_tree() -> QueryTree:
    return parse_tree(MIXED_TREE)


@pytest.fixture
def level_two_tree() -> QueryTree:
    return QueryTree.depth_one(2)


@pytest.fixture
def reject_accept() -> LeafLabeling:
    return LeafLabeling.from_text("RA")


@pytest.fixture
def missing_config(tmp_path):
    """A config path that does not exist, so every run starts from defaults."""
    return tmp_path / "absent" / "config.yaml"


@pytest.fixture
def chain_world_file(tmp_path):
    """U = {0,1,2,3} with B1 = {0,1,2}, B2 = {0,1}, B3 = {0}."""
    path = tmp_path / "chain_world.json"
    path.write_text(json.dumps({
        "universe": ["0", "1", "2", "3"],
        "chain": [["0", "1", "2"], ["0", "1"], ["0"]],
    }))
    return path


@pytest.fixture
def machine_world_file(tmp_path):
    """Level-2 machine (R, A) where a answers (1, 0) and b answers (1, 1)."""
    path = tmp_path / "machine_world.json"
    path.write_text(json.dumps({
        "universe": ["a", "b"],
        "machine": {
            "tree": "(2 leaf leaf)",
            "queries": {"v1": {"a": "a", "b": "b"}},
            "chains": {"v1": [["a", "b"], ["b"]]},
            "labelings": {"a": "RA", "b": "RA"},
        },
    }))
    return path


@pytest.fixture
def reduction_world_file(tmp_path):
    """2-tt XOR reduction on x with F = {a}."""
    path = tmp_path / "reduction_world.json"
    path.write_text(json.dumps({
        "universe": ["a", "b", "x"],
        "reduction": {
            "arity": 2,
            "queries": {"a": ["a", "b"], "b": ["a", "b"], "x": ["a", "b"]},
            "tables": {"a": "0000", "b": "0000", "x": "0110"},
            "target": ["a"],
        },
    }))
    return path
