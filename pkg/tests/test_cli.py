"""
Tests for the bhq command line.
"""

import json

import pytest
import yaml
from click.testing import CliRunner

from bhq import cli
from bhq.cli import main
from bhq.core.config import Config
from bhq.modules.finite_world import VerificationReport
from .conftest import MIXED_TREE


@pytest.fixture
def run(missing_config, monkeypatch):
    monkeypatch.delenv("BHQ_MAX_DIM", raising=False)
    runner = CliRunner()

    def invoke(*args, config=None):
        return runner.invoke(main, ["--config", str(config or missing_config), *args])

    return invoke


class TestCalculusCommands:
    def test_characterize(self, run):
        result = run("characterize", "(2 (3 leaf leaf) (3 leaf leaf))")
        assert result.exit_code == 0
        assert result.output == "R_{7-tt}(NP)\n"

    def test_characterize_json(self, run):
        result = run("characterize", "--json", '{"level": 1, "no": "leaf", "yes": "leaf"}')
        assert result.exit_code == 0
        assert result.output == "R_{1-tt}(NP)\n"

    def test_characterize_verbose(self, run):
        result = run("-v", "characterize", "(2 (3 leaf leaf) (3 leaf leaf))")
        assert result.exit_code == 0
        assert "R_{7-tt}(NP)" in result.output

    def test_capacity_closed_form(self, run):
        result = run("capacity", MIXED_TREE)
        assert result.output == "10\n"

    def test_capacity_brute_force(self, run):
        result = run("capacity", "--brute-force", MIXED_TREE)
        assert result.exit_code == 0
        assert result.output == "10\n"

    def test_compare_collapse(self, run):
        result = run("compare", "(1 (2 leaf leaf) (2 leaf leaf))", "(2 (1 leaf leaf) (1 leaf leaf))")
        assert result.exit_code == 0
        assert result.output == "COLLAPSE q=3\n"

    def test_compare_equal(self, run):
        result = run("compare", "(2 (3 leaf leaf) (3 leaf leaf))", "(7 leaf leaf)")
        assert result.output == "EQUAL\n"

    @pytest.mark.parametrize(
        "j, k, verdict",
        [(1, 2, "OrderMattersUnlessCollapse"), (2, 3, "OrderIrrelevant"), (1, 1, "OrderIrrelevant")],
    )
    def test_order_matters(self, run, j, k, verdict):
        result = run("order-matters", "--j", str(j), "--k", str(k))
        assert result.exit_code == 0
        assert result.output == f"{verdict}\n"

    def test_corollary(self, run):
        result = run("corollary", "--max", "2")
        assert result.output.splitlines() == [
            "1 1 OrderIrrelevant",
            "1 2 OrderMattersUnlessCollapse",
            "2 2 OrderIrrelevant",
        ]

    def test_losses(self, run):
        result = run("losses", "--j", "1", "--k", "1", "--path", "e3,e1,e2")
        assert result.output.splitlines() == ["E3Loss@1", "E2Loss@3"]

    def test_no_losses(self, run):
        result = run("losses", "--j", "1", "--k", "1", "--path", "e2,e1,e3")
        assert result.output == "none\n"

    def test_witness(self, run):
        result = run("witness", "--j", "2", "--k", "3")
        assert result.output.splitlines() == ["e2,e2,e2,e1,e3,e3,e3,e1", "scheme 3"]


class TestErrors:
    def test_syntax_error(self, run):
        result = run("characterize", "(2 leaf")
        assert result.exit_code == 2
        assert "error" in result.output

    def test_level_zero(self, run):
        assert run("characterize", "(0 leaf leaf)").exit_code == 2

    def test_unknown_command(self, run):
        assert run("nonsense").exit_code == 2

    def test_dimension_cap_from_environment(self, run, monkeypatch):
        monkeypatch.setenv("BHQ_MAX_DIM", "4")
        result = run("capacity", "--brute-force", MIXED_TREE)
        assert result.exit_code == 3
        assert "cap exceeded" in result.output

    def test_bad_environment_value(self, run, monkeypatch):
        monkeypatch.setenv("BHQ_MAX_DIM", "abc")
        assert run("capacity", MIXED_TREE).exit_code == 2

    def test_leaf_cap_option(self, run):
        assert run("capacity", "--brute-force", "--max-leaves", "3", MIXED_TREE).exit_code == 3

    @pytest.mark.parametrize("option, value", [
        ("--max-dim", "0"),
        ("--max-dim", "-3"),
        ("--max-leaves", "0"),
        ("--workers", "0"),
    ])
    def test_capacity_caps_must_be_positive(self, run, option, value):
        result = run("capacity", "--brute-force", option, value, MIXED_TREE)
        assert result.exit_code == 2

    @pytest.mark.parametrize("option", ["--max-dim", "--max-leaves", "--workers", "--random-cases"])
    def test_config_counts_must_be_positive(self, run, option):
        assert run("config", option, "0").exit_code == 2

    def test_unknown_log_level(self, run):
        assert run("--log-level", "LOUD", "characterize", "(1 leaf leaf)").exit_code == 2


class TestVerify:
    def test_bh_to_machine_world(self, run, chain_world_file):
        result = run("verify", "bh-to-machine", "--world", str(chain_world_file), "--j", "1", "--k", "1")
        assert result.exit_code == 0
        lines = result.output.splitlines()
        assert lines[0] == "OK bh-to-machine: checked=1 failures=0"
        assert json.loads(lines[-1]) == {"checked": 1, "failures": [], "seed": None}

    def test_machine_to_tt_world(self, run, machine_world_file):
        result = run("verify", "machine-to-tt", "--world", str(machine_world_file))
        assert result.exit_code == 0
        assert result.output.startswith("OK machine-to-tt")

    def test_tt_to_bh_world(self, run, reduction_world_file):
        result = run("verify", "tt-to-bh", "--world", str(reduction_world_file))
        assert result.exit_code == 0
        assert json.loads(result.output.splitlines()[-1])["failures"] == []

    def test_random_with_seed(self, run):
        result = run("verify", "bh-to-machine", "--random", "20", "--seed", "3")
        assert result.exit_code == 0
        assert result.output.splitlines()[0] == "OK bh-to-machine: checked=20 failures=0 seed=3"

    def test_bare_random_uses_configured_count(self, run, tmp_path):
        config_path = tmp_path / "config.yaml"
        config_path.write_text("verification:\n  random_cases: 12\n  seed: 5\n")
        result = run("verify", "tt-to-bh", "--random", config=config_path)
        assert result.exit_code == 0
        assert json.loads(result.output.splitlines()[-1])["checked"] == 12

    def test_exhaustive(self, run, tmp_path):
        config_path = tmp_path / "config.yaml"
        config_path.write_text("verification:\n  exhaustive_max_universe: 2\n  exhaustive_max_m: 3\n")
        result = run("verify", "bh-to-machine", "--exhaustive", config=config_path)
        assert result.exit_code == 0
        assert result.output.startswith("OK bh-to-machine")

    def test_exhaustive_arity_from_config(self, run, tmp_path):
        config_path = tmp_path / "config.yaml"
        config_path.write_text("verification:\n  exhaustive_max_arity: 1\n")
        result = run("verify", "tt-to-bh", "--exhaustive", config=config_path)
        assert result.exit_code == 0
        # arity 1 only
        assert json.loads(result.output.splitlines()[-1])["checked"] == 2 * (1 + 1 + 4)

    def test_machine_to_tt_reports_general_trees(self, run, tmp_path):
        config_path = tmp_path / "config.yaml"
        config_path.write_text("verification:\n  general_tree_cases: 3\n")
        result = run("verify", "machine-to-tt", "--random", "5", "--seed", "2", config=config_path)
        assert result.exit_code == 0
        lines = result.output.splitlines()
        assert lines[0] == "OK machine-to-tt: checked=8 failures=0 seed=2"
        assert lines[1:3] == ["  two-level trees: checked=5", "  general trees: checked=3"]
        assert json.loads(lines[-1])["counts"] == {"two-level trees": 5, "general trees": 3}

    def test_random_workers_must_be_positive(self, run):
        assert run("verify", "tt-to-bh", "--random", "5", "--workers", "0").exit_code == 2

    def test_save_writes_constructed_world(self, run, chain_world_file, tmp_path):
        target = tmp_path / "machine.json"
        result = run(
            "verify", "bh-to-machine", "--world", str(chain_world_file), "--j", "1", "--k", "1",
            "--save", str(target),
        )
        assert result.exit_code == 0
        saved = json.loads(target.read_text())
        assert saved["machine"]["tree"] == "(1 (1 leaf leaf) (1 leaf leaf))"
        assert saved["chain"] == [["0", "1", "2"], ["0", "1"], ["0"]]

    def test_save_needs_world(self, run, tmp_path):
        result = run("verify", "tt-to-bh", "--random", "3", "--save", str(tmp_path / "out.json"))
        assert result.exit_code == 2

    def test_verbose_progress(self, run):
        result = run("-v", "verify", "tt-to-bh", "--random", "5", "--seed", "1")
        assert result.exit_code == 0
        assert "OK tt-to-bh" in result.output

    @pytest.mark.parametrize("extra", [[], ["--exhaustive", "--random", "5"]])
    def test_exactly_one_mode(self, run, extra):
        assert run("verify", "tt-to-bh", *extra).exit_code == 2

    def test_missing_shape(self, run, chain_world_file):
        assert run("verify", "bh-to-machine", "--world", str(chain_world_file)).exit_code == 2

    def test_failure_exit_code(self, run, chain_world_file, monkeypatch):
        def failing(*args, **kwargs):
            return VerificationReport("bh-to-machine", checked=1, failures=["input 0: languages differ"])

        monkeypatch.setattr(cli, "verify_world_file", failing)
        result = run("verify", "bh-to-machine", "--world", str(chain_world_file), "--j", "1", "--k", "1")
        assert result.exit_code == 1
        assert "  failure: input 0: languages differ" in result.output


class TestExportDot:
    def test_tree(self, run):
        result = run("export-dot", "(1 leaf leaf)", "--labeling", "RA")
        assert result.exit_code == 0
        assert 'v1 [shape=box, label="v1: BH_1"];' in result.output
        assert 'v1 -> leaf0 [label="no"];' in result.output
        assert 'v1 -> leaf1 [label="yes"];' in result.output

    def test_hypercube(self, run):
        result = run("export-dot", "(1 leaf leaf)", "--hypercube", "--labeling", "RA")
        assert result.exit_code == 0
        assert r'"1" [label="1\n1", style=filled, fillcolor="palegreen"];' in result.output
        assert '"0" -> "1" [color=red];' in result.output

    def test_hypercube_cap(self, run):
        assert run("export-dot", MIXED_TREE, "--hypercube").exit_code == 3

    def test_output_file(self, run, tmp_path):
        target = tmp_path / "tree.dot"
        result = run("export-dot", "(1 leaf leaf)", "--output", str(target))
        assert result.exit_code == 0
        assert target.read_text().startswith("digraph query_tree {")


class TestConfigCommand:
    def test_show_defaults(self, run):
        result = run("config")
        assert result.exit_code == 0
        assert yaml.safe_load(result.output)["limits"]["max_dim"] == 24

    def test_update_and_save(self, run, tmp_path):
        config_path = tmp_path / "nested" / "config.yaml"
        result = run("config", "--max-dim", "10", "--seed", "42", config=config_path)
        assert result.exit_code == 0
        saved = Config.load_config(config_path)
        assert saved.limits.max_dim == 10
        assert saved.verification.seed == 42
