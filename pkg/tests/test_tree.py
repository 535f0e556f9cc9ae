from __future__ import annotations

import itertools
import json
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commentlens.tree import (
    BooleanSplit, CategoricalSplit, Dataset, DecisionTreeModel, Leaf,
    NumericSplit, SplitNode, UndefinedSplit, candidate_splits, classify_node,
    gain_ratio, information_gain, to_rules, train_c45, train_model,
)


def cat_examples(values, labels):
    return [({"f": v}, lb) for v, lb in zip(values, labels)]


class TestGainRatio:
    def test_perfect_separation_is_one(self):
        examples = cat_examples("aabb", "PPNN")
        split = candidate_splits(examples, "f")[0]
        assert gain_ratio(examples, split) == pytest.approx(1.0)

    def test_independent_feature_is_zero(self):
        examples = cat_examples("aabb", "PNPN")
        split = candidate_splits(examples, "f")[0]
        assert gain_ratio(examples, split) == pytest.approx(0.0)

    def test_three_one_mix(self):
        examples = cat_examples("aabb", "PPPN")
        split = candidate_splits(examples, "f")[0]
        assert information_gain(examples, split) == pytest.approx(0.311,
                                                                  abs=5e-4)
        assert gain_ratio(examples, split) == pytest.approx(0.311, abs=5e-4)

    def test_single_part_is_undefined(self):
        examples = cat_examples("aaaa", "PPNN")
        with pytest.raises(UndefinedSplit):
            gain_ratio(examples, CategoricalSplit("f", ("a",)))


class TestTrain:
    def test_pure_dataset_single_leaf(self):
        ds = Dataset.from_examples(cat_examples("abcd", "PPPP"))
        tree = train_c45(ds, min_examples=2)
        assert isinstance(tree, Leaf)
        assert tree.label == "P"

    def test_perfectly_separable_two_leaves(self):
        ds = Dataset.from_examples(cat_examples("aabb", "PPNN"))
        tree = train_c45(ds, min_examples=2)
        assert isinstance(tree, SplitNode)
        assert all(isinstance(c, Leaf) for c in tree.children)
        assert {c.label for c in tree.children} == {"P", "N"}

    def test_min_examples_stops_growth(self):
        ds = Dataset.from_examples(cat_examples("aabb", "PPNN"))
        tree = train_c45(ds, min_examples=10)
        assert isinstance(tree, Leaf)

    def test_determinism(self):
        rng = random.Random(5)
        examples = [
            ({"a": rng.random() < 0.5, "b": rng.random() < 0.5,
              "c": rng.random() < 0.5}, rng.choice("PN"))
            for _ in range(30)
        ]
        ds = Dataset.from_examples(examples)
        t1 = train_model(ds, min_examples=2)
        t2 = train_model(ds, min_examples=2)
        assert t1.to_json() == t2.to_json()

    def test_numeric_threshold_boundary_goes_left(self):
        examples = [({"n": 1}, "A"), ({"n": 1}, "A"),
                    ({"n": 3}, "B"), ({"n": 3}, "B")]
        tree = train_c45(Dataset.from_examples(examples), min_examples=2)
        assert isinstance(tree, SplitNode)
        assert tree.threshold == pytest.approx(2.0)
        label, _ = classify_node(tree, {"n": 2.0})  # exactly the threshold
        assert label == "A"

    def test_injective_features_reach_full_accuracy(self):
        # one distinct label per feature vector: every split carries gain,
        # so the greedy learner can always separate fully
        values = list(itertools.product([False, True], repeat=3))
        examples = [({"a": a, "b": b, "c": c}, f"L{int(a)}{int(b)}{int(c)}")
                    for a, b, c in values]
        tree = train_c45(Dataset.from_examples(examples), min_examples=1)
        for fv, label in examples:
            assert classify_node(tree, fv)[0] == label

    def test_parity_labels_stop_on_zero_gain(self):
        # balanced XOR: no single feature has positive gain, so the learner
        # stops with an impure leaf rather than splitting blindly
        examples = [({"a": a, "b": b}, "P" if a == b else "N")
                    for a in (False, True) for b in (False, True)]
        tree = train_c45(Dataset.from_examples(examples), min_examples=1)
        assert isinstance(tree, Leaf)

    def test_chosen_split_has_maximal_gain_ratio(self):
        rng = random.Random(11)
        examples = [
            ({"a": rng.random() < 0.5, "b": rng.random() < 0.5,
              "n": rng.randint(0, 4)}, rng.choice("PN"))
            for _ in range(25)
        ]
        tree = train_c45(Dataset.from_examples(examples), min_examples=5)
        if isinstance(tree, Leaf):
            pytest.skip("degenerate random draw")
        best = -1.0
        for feature in ("a", "b", "n"):
            for split in candidate_splits(examples, feature):
                parts = split.partition(examples)
                if sum(1 for p in parts if p) < 2:
                    continue
                if information_gain(examples, split) <= 1e-12:
                    continue
                best = max(best, gain_ratio(examples, split))
        root_split = (BooleanSplit(tree.feature) if tree.kind == "boolean"
                      else NumericSplit(tree.feature, tree.threshold)
                      if tree.kind == "numeric"
                      else CategoricalSplit(tree.feature, tree.branch_keys))
        assert gain_ratio(examples, root_split) == pytest.approx(best)


class TestClassify:
    def test_single_leaf_always_that_label(self):
        ds = Dataset.from_examples(cat_examples("ab", "PP"))
        model = train_model(ds, min_examples=10)
        assert model.classify({}) == ("P", 1.0)
        assert model.classify({"f": "zzz"}) == ("P", 1.0)

    def test_missing_feature_routes_to_majority_child(self):
        # 3 'a' examples vs 2 'b' examples: majority child is the 'a' leaf
        examples = cat_examples("aaabb", "PPPNN")
        tree = train_c45(Dataset.from_examples(examples), min_examples=2)
        assert isinstance(tree, SplitNode)
        label, _ = classify_node(tree, {})
        assert label == "P"

    def test_unseen_category_routes_to_majority_child(self):
        examples = cat_examples("aaabb", "PPPNN")
        tree = train_c45(Dataset.from_examples(examples), min_examples=2)
        label, _ = classify_node(tree, {"f": "unseen"})
        assert label == "P"

    def test_confidence_is_leaf_majority_fraction(self):
        examples = cat_examples("aaaa", "PPPN")
        tree = train_c45(Dataset.from_examples(examples), min_examples=10)
        label, confidence = classify_node(tree, {"f": "a"})
        assert label == "P"
        assert confidence == pytest.approx(0.75)


class TestRules:
    def test_single_leaf_single_rule(self):
        ds = Dataset.from_examples(cat_examples("ab", "PP"))
        rules = to_rules(train_c45(ds, min_examples=10))
        assert len(rules.rules) == 1
        assert rules.rules[0].tests == ()

    def test_boolean_split_two_rules(self):
        examples = [({"flag": False}, "N"), ({"flag": False}, "N"),
                    ({"flag": True}, "P"), ({"flag": True}, "P")]
        rules = to_rules(train_c45(Dataset.from_examples(examples),
                                   min_examples=2))
        assert len(rules.rules) == 2
        assert {r.label for r in rules.rules} == {"P", "N"}

    def test_exhaustive_equivalence_three_binary_features(self):
        rng = random.Random(7)
        examples = [
            ({"a": rng.random() < 0.5, "b": rng.random() < 0.5,
              "c": rng.random() < 0.5}, rng.choice("PN"))
            for _ in range(20)
        ]
        tree = train_c45(Dataset.from_examples(examples), min_examples=2)
        rules = to_rules(tree)
        for combo in itertools.product([False, True], repeat=3):
            fv = dict(zip("abc", combo))
            assert rules.classify(fv) == classify_node(tree, fv)
        # missing-feature cases must agree too
        for subset in itertools.combinations("abc", 2):
            for combo in itertools.product([False, True], repeat=2):
                fv = dict(zip(subset, combo))
                assert rules.classify(fv) == classify_node(tree, fv)

    def test_render_mentions_fallback(self):
        examples = cat_examples("aaabb", "PPPNN")
        rules = to_rules(train_c45(Dataset.from_examples(examples),
                                   min_examples=2))
        text = rules.render()
        assert "IF" in text and "THEN" in text
        assert "[or missing]" in text


class TestModelIO:
    def test_json_roundtrip_preserves_classification(self, tmp_path):
        rng = random.Random(3)
        examples = [
            ({"a": rng.random() < 0.5, "n": rng.randint(0, 9),
              "c": rng.choice("xyz")}, rng.choice("PNQ"))
            for _ in range(40)
        ]
        model = train_model(Dataset.from_examples(examples), task="demo",
                            min_examples=3)
        path = tmp_path / "model.json"
        model.save(path)
        loaded = DecisionTreeModel.load(path)
        assert loaded.task == "demo"
        assert loaded.node_count() == model.node_count()
        assert loaded.depth() == model.depth()
        for fv, _ in examples:
            assert loaded.classify(fv) == model.classify(fv)
        assert path.with_suffix(".rules.txt").exists()

    def test_rejects_foreign_documents(self, tmp_path):
        path = tmp_path / "bogus.json"
        path.write_text(json.dumps({"format": "something-else"}))
        with pytest.raises(ValueError):
            DecisionTreeModel.load(path)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.booleans(), st.booleans()),
                min_size=1, max_size=16))
def test_training_accuracy_perfect_when_features_determine_labels(rows):
    # one label per distinct feature vector keeps the target greedily
    # separable; parity-style targets are covered by the zero-gain test
    examples = [({"a": a, "b": b}, f"L{int(a)}{int(b)}") for a, b in rows]
    tree = train_c45(Dataset.from_examples(examples), min_examples=1)
    for fv, label in examples:
        assert classify_node(tree, fv)[0] == label
