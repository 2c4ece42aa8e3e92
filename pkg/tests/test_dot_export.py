"""
Tests for DOT rendering of trees and hypercubes.
"""

import pytest

from bhq.core.errors import InputError, ResourceError
from bhq.modules.dot_export import hypercube_to_dot, tree_to_dot
from bhq.modules.query_tree import LeafLabeling, QueryTree


class TestTreeToDot:
    def test_mixed_tree(self, mixed_tree):
        dot = tree_to_dot(mixed_tree)
        assert dot.startswith("digraph query_tree {")
        assert dot.rstrip().endswith("}")
        for node_id, level in zip(mixed_tree.node_ids, mixed_tree.levels):
            assert f'{node_id} [shape=box, label="{node_id}: BH_{level}"];' in dot
        assert dot.count("->") == 10
        assert 'v1 -> v2 [label="no"];' in dot
        assert 'v1 -> v3 [label="yes"];' in dot
        assert 'v5 -> leaf5 [label="yes"];' in dot

    def test_labeling_colours_leaves(self, level_two_tree, reject_accept):
        dot = tree_to_dot(level_two_tree, reject_accept)
        assert 'leaf0 [shape=ellipse, label="leaf 0: R", style=filled, fillcolor="lightpink"];' in dot
        assert 'leaf1 [shape=ellipse, label="leaf 1: A", style=filled, fillcolor="palegreen"];' in dot

    def test_labeling_size_is_checked(self, mixed_tree):
        with pytest.raises(InputError):
            tree_to_dot(mixed_tree, LeafLabeling.from_text("RA"))


class TestHypercubeToDot:
    def test_square(self, level_two_tree, reject_accept):
        dot = hypercube_to_dot(level_two_tree, reject_accept)
        assert dot.startswith("digraph hypercube {")
        for name, label, colour in [("00", 0, "lightpink"), ("10", 1, "palegreen"), ("11", 2, "lightpink")]:
            assert f'"{name}" [label="{name}\\n{label}", style=filled, fillcolor="{colour}"];' in dot
        assert dot.count("->") == 4
        assert '"00" -> "10" [color=red];' in dot
        assert '"01" -> "11";' in dot

    def test_unlabeled(self):
        dot = hypercube_to_dot(QueryTree.depth_one(1))
        assert '"0" [label="0"];' in dot
        assert '"0" -> "1";' in dot

    def test_dimension_cap(self, mixed_tree):
        with pytest.raises(ResourceError) as excinfo:
            hypercube_to_dot(mixed_tree, max_dim=6)
        assert excinfo.value.requested == 12
