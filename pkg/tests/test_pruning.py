"""Keep-or-prune scoring and the bottom-up pruning pass."""

import numpy as np
import pytest

import support
from cstree.costs import TestCostVector, two_class_matrix
from cstree.data import Dataset
from cstree.evaluation import average_cost
from cstree.pruning import (
    PruneTraceEntry,
    leaf_replacement_cost,
    post_prune,
    subtree_cost,
)
from cstree.tree import (
    TreeNode,
    build_tree,
    deserialize,
    serialize,
    structural_equal,
)


class TestSubtreeCost:
    def test_left_branch_full_path_charging(self, bound_fixture, table_costs, example_mc):
        node = bound_fixture.root.left
        b = subtree_cost(bound_fixture, node, table_costs, example_mc)
        assert b.test_cost_total == 120.0
        assert b.misclassification_total == 0.0
        assert b.average == 8.0
        assert b.count == 15

    def test_retested_attribute_charged_once(self, bound_fixture, table_costs, example_mc):
        # this subtree re-tests the root attribute, so its rows pay for
        # two distinct tests, not three
        node = bound_fixture.root.left.right
        b = subtree_cost(bound_fixture, node, table_costs, example_mc)
        assert b.test_cost_total == 48.0
        assert b.average == 8.0
        assert b.count == 6

    def test_right_branch(self, bound_fixture, table_costs, example_mc):
        b = subtree_cost(bound_fixture, bound_fixture.root.right, table_costs, example_mc)
        assert b.test_cost_total == 81.0
        assert b.average == 9.0
        assert b.count == 9

    def test_root_matches_average_cost(self, bound_fixture, sample, table_costs, example_mc):
        via_node = subtree_cost(bound_fixture, bound_fixture.root, table_costs, example_mc)
        via_rows = average_cost(bound_fixture, sample.all_instances(), table_costs, example_mc)
        assert via_node == via_rows
        assert via_node.average == 8.375

    def test_leaf_is_costed_too(self, bound_fixture, table_costs, example_mc):
        leaf = bound_fixture.root.left.left
        b = subtree_cost(bound_fixture, leaf, table_costs, example_mc)
        assert b.test_cost_total == 72.0
        assert b.misclassification_total == 0.0
        assert b.count == 9

    def test_foreign_node_rejected(self, bound_fixture, table_costs, example_mc):
        stray = TreeNode(histogram=np.array([1, 1]), predicted_class=0)
        with pytest.raises(ValueError, match="does not belong"):
            subtree_cost(bound_fixture, stray, table_costs, example_mc)

    def test_unbound_tree_rejected(self, fixture_tree_path, table_costs, example_mc):
        bare = deserialize(fixture_tree_path.read_text(encoding="utf-8"))
        with pytest.raises(ValueError, match="attach_instances"):
            subtree_cost(bare, bare.root, table_costs, example_mc)


class TestLeafReplacementCost:
    def test_mid_tree_replacement(self, bound_fixture, table_costs, example_mc):
        b = leaf_replacement_cost(
            bound_fixture, bound_fixture.root.left, table_costs, example_mc
        )
        assert b.test_cost_total == 15.0
        assert b.misclassification_total == 100.0
        assert b.average == 115.0 / 15.0
        assert b.average == pytest.approx(7.667, abs=0.005)

    def test_deep_replacement_keeps_path_tests(self, bound_fixture, table_costs, example_mc):
        b = leaf_replacement_cost(
            bound_fixture, bound_fixture.root.left.right, table_costs, example_mc
        )
        assert b.test_cost_total == 48.0
        assert b.misclassification_total == 100.0
        assert b.average == 148.0 / 6.0
        assert b.average == pytest.approx(24.67, abs=0.005)

    def test_root_replacement_pays_no_tests(self, bound_fixture, table_costs, example_mc):
        b = leaf_replacement_cost(bound_fixture, bound_fixture.root, table_costs, example_mc)
        assert b.test_cost_total == 0.0
        assert b.misclassification_total == 450.0
        assert b.average == 18.75

    def test_minority_heavy_node(self, bound_fixture, table_costs, example_mc):
        b = leaf_replacement_cost(bound_fixture, bound_fixture.root.right, table_costs, example_mc)
        assert b.test_cost_total == 9.0
        assert b.misclassification_total == 1000.0
        assert b.average == 1009.0 / 9.0
        assert b.average == pytest.approx(112.1, abs=0.05)


class TestPostPrune:
    def test_golden_trace(self, bound_fixture, table_costs, example_mc):
        pruned, trace = post_prune(bound_fixture, table_costs, example_mc)

        assert [e.node_id for e in trace] == [
            "root.left.right",
            "root.left",
            "root.right",
            "root",
        ]
        assert [e.attribute for e in trace] == [1, 4, 6, 1]
        assert [e.pruned for e in trace] == [False, True, False, False]
        assert [e.instance_count for e in trace] == [6, 15, 9, 24]

        keeps = [(e.cost_keep.test_cost_total, e.cost_keep.misclassification_total) for e in trace]
        assert keeps == [(48.0, 0.0), (120.0, 0.0), (81.0, 0.0), (201.0, 0.0)]
        prunes = [
            (e.cost_prune.test_cost_total, e.cost_prune.misclassification_total)
            for e in trace
        ]
        assert prunes == [(48.0, 100.0), (15.0, 100.0), (9.0, 100.0 * 10), (0.0, 450.0)]

        averages = [
            (e.cost_keep.average, e.cost_prune.average) for e in trace
        ]
        expected = [(8.0, 148 / 6), (8.0, 115 / 15), (9.0, 1009 / 9), (8.375, 18.75)]
        for got, want in zip(averages, expected):
            assert got[0] == pytest.approx(want[0], abs=0.005)
            assert got[1] == pytest.approx(want[1], abs=0.005)

        assert pruned.node_count() == 5
        assert pruned.root.left.is_leaf
        assert pruned.root.left.predicted_class == 0
        assert not pruned.root.right.is_leaf

    def test_pruned_average_drops(self, bound_fixture, sample, table_costs, example_mc):
        pruned, _ = post_prune(bound_fixture, table_costs, example_mc)
        before = average_cost(bound_fixture, sample.all_instances(), table_costs, example_mc)
        after = average_cost(pruned, sample.all_instances(), table_costs, example_mc)
        assert before.average == 8.375
        assert after.average == pytest.approx(196 / 24, rel=1e-12)
        assert after.average < before.average

    def test_input_tree_untouched(self, bound_fixture, table_costs, example_mc):
        before = serialize(bound_fixture)
        post_prune(bound_fixture, table_costs, example_mc)
        assert serialize(bound_fixture) == before

    def test_trace_flag_is_strict_comparison(self, bound_fixture, table_costs, example_mc):
        _, trace = post_prune(bound_fixture, table_costs, example_mc)
        for entry in trace:
            assert isinstance(entry, PruneTraceEntry)
            assert entry.pruned == (entry.cost_prune.average < entry.cost_keep.average)
            assert entry.cost_keep.count == entry.instance_count
            assert entry.cost_prune.count == entry.instance_count

    def test_exact_tie_keeps_by_default(self):
        ds = Dataset.from_arrays([[1.0], [2.0]], [0, 1], class_names=("0", "1"))
        tree = build_tree(ds.all_instances(), TestCostVector((3.0,)), 0.0, min_leaf_size=1)
        assert not tree.root.is_leaf
        mc = two_class_matrix(99.0, 6.0)
        kept, trace = post_prune(tree, tree.tc_used, mc)
        assert trace[0].cost_keep.average == trace[0].cost_prune.average == 3.0
        assert not trace[0].pruned
        assert not kept.root.is_leaf

    def test_exact_tie_prunes_when_asked(self):
        ds = Dataset.from_arrays([[1.0], [2.0]], [0, 1], class_names=("0", "1"))
        tree = build_tree(ds.all_instances(), TestCostVector((3.0,)), 0.0, min_leaf_size=1)
        mc = two_class_matrix(99.0, 6.0)
        cut, trace = post_prune(tree, tree.tc_used, mc, prune_on_tie=True)
        assert trace[0].pruned
        assert cut.root.is_leaf
        assert cut.root.predicted_class == 0

    def test_unbound_tree_rejected(self, fixture_tree_path, table_costs, example_mc):
        bare = deserialize(fixture_tree_path.read_text(encoding="utf-8"))
        with pytest.raises(ValueError, match="attach_instances"):
            post_prune(bare, table_costs, example_mc)

    def test_wrong_cost_arity_rejected(self, bound_fixture, example_mc):
        with pytest.raises(ValueError, match="one test cost per attribute"):
            post_prune(bound_fixture, TestCostVector((1.0,)), example_mc)

    def test_never_raises_training_cost_and_settles_in_one_pass(self):
        rng = np.random.default_rng(7)
        for _ in range(60):
            ds = support.random_dataset(rng)
            tc = support.random_costs(rng, ds.num_attributes)
            mc = support.random_matrix(rng, ds.num_classes)
            lam = float(rng.choice([-4.0, -2.0, -0.5, 0.0]))
            tree = build_tree(ds.all_instances(), tc, lam)
            pruned, trace = post_prune(tree, tc, mc)

            rows = ds.all_instances()
            before = average_cost(tree, rows, tc, mc)
            after = average_cost(pruned, rows, tc, mc)
            assert after.average <= before.average + 1e-9

            again, second_trace = post_prune(pruned, tc, mc)
            assert structural_equal(again, pruned)
            assert not any(e.pruned for e in second_trace)

    def test_pruned_tree_is_never_larger(self):
        rng = np.random.default_rng(13)
        for _ in range(30):
            ds = support.random_dataset(rng)
            tc = support.random_costs(rng, ds.num_attributes)
            mc = support.random_matrix(rng, ds.num_classes)
            tree = build_tree(ds.all_instances(), tc, -1.0)
            pruned, trace = post_prune(tree, tc, mc)
            assert pruned.node_count() <= tree.node_count()
            if any(e.pruned for e in trace):
                assert pruned.node_count() < tree.node_count()
