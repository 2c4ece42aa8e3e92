"""
Tests for reading and writing world files.
"""

import json

import pytest

from bhq.core.errors import InputError
from bhq.modules.bh_core import TelescopingChain
from bhq.modules.finite_world import FiniteWorld, language_of, machine_from_bh_chain
from bhq.modules.world_io import dump_world, load_world, parse_world, world_document


class TestParseWorld:
    def test_chain(self, chain_world_file):
        loaded = load_world(chain_world_file)
        assert loaded.world.universe == ("0", "1", "2", "3")
        assert loaded.chain.length == 3
        assert loaded.machine is None and loaded.reduction is None

    def test_machine(self, machine_world_file):
        loaded = load_world(machine_world_file)
        assert loaded.machine.tree.levels == (2,)
        assert language_of(loaded.world, loaded.machine).members == frozenset({"a"})

    def test_reduction(self, reduction_world_file):
        loaded = load_world(reduction_world_file)
        assert loaded.reduction.tables["x"] == (False, True, True, False)
        assert loaded.reduction.target == frozenset({"a"})

    def test_json_tree_and_symbol_labelings(self):
        loaded = parse_world(json.dumps({
            "universe": ["a"],
            "machine": {
                "tree": {"level": 1, "no": "leaf", "yes": "leaf"},
                "queries": {"v1": {"a": "a#1"}},
                "chains": {"v1": [["a#1"]]},
                "labelings": {"a": [0, 1]},
            },
        }))
        assert language_of(loaded.world, loaded.machine).members == frozenset({"a"})

    @pytest.mark.parametrize(
        "document",
        [
            "not json",
            '{"chain": [["a"]]}',
            '{"universe": ["a"], "chain": [[], ["a"]]}',
            '{"universe": ["a"], "reduction": {"arity": 1, "queries": {"a": ["a"]}, "tables": {"a": "0x"}}}',
            '{"universe": ["a"], "reduction": {"arity": 0, "queries": {}, "tables": {}}}',
        ],
    )
    def test_rejects(self, document):
        with pytest.raises(InputError):
            parse_world(document)

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputError, match="cannot read"):
            load_world(tmp_path / "absent.json")


class TestDumpWorld:
    def test_constructed_machine_reloads(self, tmp_path):
        world = FiniteWorld(("0", "1", "2", "3"))
        chain = TelescopingChain.build(world.universe, [["0", "1", "2"], ["0", "1"], ["0"]])
        spec, _ = machine_from_bh_chain(1, 1, world, chain)
        path = dump_world(tmp_path / "world.json", world_document(world, machine=spec, chain=chain))
        loaded = load_world(path)
        assert language_of(loaded.world, loaded.machine).members == frozenset({"0", "2"})
        assert loaded.chain == chain
