"""
Tests for the exhaustive, random and world-file verification runners.
"""

import random

import pytest

from bhq.core.errors import InputError
from bhq.modules.calculus import m_tree
from bhq.modules.finite_world import chain_language, language_of, language_of_tt
from bhq.modules import verification
from bhq.modules.verification import (
    GENERAL_KIND,
    TWO_LEVEL_KIND,
    Direction,
    batch_seeds,
    exhaustive_bh_to_machine,
    exhaustive_machine_to_tt,
    exhaustive_tt_to_bh,
    general_tree_count,
    random_machine,
    random_tree,
    random_tt_reduction,
    random_world,
    run_batch,
    run_exhaustive,
    run_random,
    verify_world_file,
)
from bhq.modules.world_io import load_world


class TestExhaustive:
    def test_bh_to_machine(self):
        seen = []
        report = exhaustive_bh_to_machine(max_universe=3, max_m=5, on_batch=seen.append)
        assert report.ok, report.failures[:5]
        # (1,1,1) alone contributes 4^3 chains
        assert report.checked >= 64
        assert sum(seen) == report.checked

    def test_machine_to_tt(self):
        report = exhaustive_machine_to_tt(max_m=5)
        assert report.ok, report.failures[:5]
        assert report.checked > 0

    def test_tt_to_bh(self):
        report = exhaustive_tt_to_bh(max_arity=2)
        assert report.ok, report.failures[:5]
        # one chain check plus one check per input, for each target
        assert report.checked == 2 * (1 + 1 + 4) + 4 * (1 + 2 + 16)

    def test_tt_to_bh_arity_is_its_own_bound(self):
        report = run_exhaustive(Direction.TT_TO_BH, max_m=1, max_arity=2)
        assert report.checked == 2 * (1 + 1 + 4) + 4 * (1 + 2 + 16)

    @pytest.mark.slow
    @pytest.mark.parametrize("direction", list(Direction))
    def test_run_exhaustive_defaults(self, direction):
        report = run_exhaustive(direction)
        assert report.ok, report.failures[:5]


class TestRandomGenerators:
    def test_random_tree_bounds(self):
        rng = random.Random(3)
        for _ in range(50):
            tree = random_tree(rng, max_level_sum=8, max_leaves=5)
            assert tree.dimension <= 8
            assert tree.leaf_count <= 5
            assert all(lvl >= 1 for lvl in tree.levels)

    def test_random_machine_is_valid(self):
        rng = random.Random(11)
        world = random_world(rng)
        tree = random_tree(rng, max_level_sum=6, max_leaves=4)
        spec = random_machine(rng, world, tree)
        assert set(language_of(world, spec).members) <= set(world.universe)

    def test_random_tt_polarity_alternates(self):
        rng = random.Random(5)
        world = random_world(rng, max_size=6)
        reduction = random_tt_reduction(rng, world, 2)
        assert [reduction.polarity(x) for x in world.universe] == [i % 2 for i in range(len(world.universe))]
        language_of_tt(world, reduction)


class TestRandomRuns:
    @pytest.mark.parametrize("direction", list(Direction))
    def test_fifty_cases(self, direction):
        report = run_random(direction, cases=50, seed=2024, batch_size=20, general_cases=0)
        assert report.ok, report.failures[:5]
        assert report.checked == 50
        assert report.seed == 2024

    def test_machine_to_tt_adds_general_trees(self):
        report = run_random(Direction.MACHINE_TO_TT, cases=20, seed=3, batch_size=10, general_cases=15)
        assert report.ok, report.failures[:5]
        assert report.checked == 35
        assert report.counts == {TWO_LEVEL_KIND: 20, GENERAL_KIND: 15}
        assert report.summary()["counts"] == {TWO_LEVEL_KIND: 20, GENERAL_KIND: 15}

    def test_general_tree_default(self):
        assert general_tree_count(Direction.MACHINE_TO_TT) == 100
        assert general_tree_count(Direction.MACHINE_TO_TT, 7) == 7
        assert general_tree_count(Direction.TT_TO_BH) == 0

    def test_general_trees_only_for_machine_to_tt(self):
        with pytest.raises(InputError):
            run_random(Direction.TT_TO_BH, cases=5, seed=1, general_cases=3)

    def test_main_cases_are_two_level(self, monkeypatch):
        drawn = []
        real = verification.verify_machine_to_tt

        def spy(world, spec, max_dim=None):
            drawn.append(spec.tree)
            return real(world, spec, max_dim)

        monkeypatch.setattr(verification, "verify_machine_to_tt", spy)
        run_batch(Direction.MACHINE_TO_TT, batch_seed=5, cases=40)
        assert len(drawn) == 40
        assert all(tree.two_level_levels() is not None for tree in drawn)

    def test_general_batch_is_seeded_apart_from_main_batches(self):
        with_general = run_random(Direction.MACHINE_TO_TT, cases=10, seed=6, general_cases=10)
        without = run_random(Direction.MACHINE_TO_TT, cases=10, seed=6, general_cases=0)
        assert without.counts == {TWO_LEVEL_KIND: 10}
        assert with_general.checked == without.checked + 10

    def test_same_seed_same_report(self):
        first = run_random(Direction.BH_TO_MACHINE, cases=30, seed=9, batch_size=10)
        second = run_random(Direction.BH_TO_MACHINE, cases=30, seed=9, batch_size=10)
        assert first.summary() == second.summary()

    def test_batches_follow_run_seed(self):
        assert batch_seeds(1, 3) == batch_seeds(1, 3)
        assert batch_seeds(1, 3) != batch_seeds(2, 3)

    def test_progress_callback(self):
        seen = []
        run_random(Direction.TT_TO_BH, cases=25, seed=1, batch_size=10, on_batch=seen.append)
        assert seen == [10, 10, 5]

    def test_progress_covers_general_trees(self):
        seen = []
        run_random(Direction.MACHINE_TO_TT, cases=15, seed=1, batch_size=10, general_cases=5, on_batch=seen.append)
        assert seen == [10, 5, 5]

    def test_run_batch_counts_cases(self):
        report = run_batch(Direction.MACHINE_TO_TT, batch_seed=77, cases=7)
        assert report.checked == 7
        assert report.seed == 77
        assert report.counts == {TWO_LEVEL_KIND: 7}

    def test_needs_a_case(self):
        with pytest.raises(InputError):
            run_random(Direction.TT_TO_BH, cases=0, seed=1)

    @pytest.mark.slow
    def test_workers_do_not_change_the_result(self):
        single = run_random(Direction.MACHINE_TO_TT, cases=60, seed=4, batch_size=20, workers=1)
        pooled = run_random(Direction.MACHINE_TO_TT, cases=60, seed=4, batch_size=20, workers=2)
        assert single.summary() == pooled.summary()

    @pytest.mark.slow
    @pytest.mark.parametrize("direction", list(Direction))
    def test_five_hundred_cases(self, direction):
        report = run_random(direction, cases=500, seed=7)
        assert report.ok, report.failures[:5]
        if direction is Direction.MACHINE_TO_TT:
            assert report.counts == {TWO_LEVEL_KIND: 500, GENERAL_KIND: 100}
            assert report.checked == 600
        else:
            assert report.checked == 500


class TestWorldFiles:
    def test_bh_to_machine(self, chain_world_file):
        report = verify_world_file(Direction.BH_TO_MACHINE, load_world(chain_world_file), j=1, k=1)
        assert report.ok
        assert report.checked == 1

    def test_bh_to_machine_needs_shape(self, chain_world_file):
        with pytest.raises(InputError, match="--j and --k"):
            verify_world_file(Direction.BH_TO_MACHINE, load_world(chain_world_file))

    def test_bh_to_machine_wrong_shape(self, chain_world_file):
        with pytest.raises(InputError, match="m=7"):
            verify_world_file(Direction.BH_TO_MACHINE, load_world(chain_world_file), j=2, k=3)

    def test_machine_to_tt(self, machine_world_file):
        loaded = load_world(machine_world_file)
        assert m_tree(loaded.machine.tree) == 2
        report = verify_world_file(Direction.MACHINE_TO_TT, loaded)
        assert report.ok, report.failures

    def test_tt_to_bh(self, reduction_world_file):
        report = verify_world_file(Direction.TT_TO_BH, load_world(reduction_world_file))
        assert report.ok, report.failures

    @pytest.mark.parametrize(
        "direction, needs",
        [(Direction.MACHINE_TO_TT, "machine"), (Direction.TT_TO_BH, "reduction")],
    )
    def test_missing_part(self, chain_world_file, direction, needs):
        with pytest.raises(InputError, match=needs):
            verify_world_file(direction, load_world(chain_world_file))

    def test_bh_to_machine_saves_constructed_machine(self, chain_world_file, tmp_path):
        target = tmp_path / "machine.json"
        report = verify_world_file(Direction.BH_TO_MACHINE, load_world(chain_world_file), j=1, k=1, save_to=target)
        assert report.ok
        saved = load_world(target)
        assert language_of(saved.world, saved.machine) == chain_language(saved.world, saved.chain)

    def test_machine_to_tt_saves_reduction(self, machine_world_file, tmp_path):
        target = tmp_path / "reduction.json"
        verify_world_file(Direction.MACHINE_TO_TT, load_world(machine_world_file), save_to=target)
        saved = load_world(target)
        assert saved.reduction.arity == 2
        assert language_of_tt(saved.world, saved.reduction) == language_of(saved.world, saved.machine)

    def test_tt_to_bh_saves_chain(self, reduction_world_file, tmp_path):
        target = tmp_path / "chain.json"
        verify_world_file(Direction.TT_TO_BH, load_world(reduction_world_file), save_to=target)
        saved = load_world(target)
        assert saved.chain.length == 2
        assert saved.reduction == load_world(reduction_world_file).reduction

    def test_unwritable_save_target(self, chain_world_file, tmp_path):
        with pytest.raises(InputError, match="cannot write"):
            verify_world_file(
                Direction.BH_TO_MACHINE, load_world(chain_world_file), j=1, k=1,
                save_to=tmp_path / "absent" / "machine.json",
            )
