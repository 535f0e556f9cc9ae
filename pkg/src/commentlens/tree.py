"""C4.5 decision-tree learning over mixed categorical/numeric/boolean features.

Splits are chosen by gain ratio (information gain divided by the entropy of
the partition sizes).  Growth stops at a minimum example count, on pure
nodes, or when no split has positive gain; there is no post-pruning.
Missing feature values and unseen categorical values route to the majority
child, at training and classification time alike.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Union

FeatureValue = Union[str, int, float, bool]
FeatureVector = Mapping[str, FeatureValue]
Example = tuple[FeatureVector, str]

MODEL_FORMAT = "commentlens-tree"
MODEL_VERSION = 1

_EPS = 1e-12


class UndefinedSplit(Exception):
    """The candidate split does not actually partition the examples."""


class ModelFeatureMismatch(Exception):
    """A model references feature names the caller does not provide."""


@dataclass(frozen=True)
class Dataset:
    examples: list[Example]
    label_set: tuple[str, ...]

    @staticmethod
    def from_examples(examples: Iterable[Example],
                      label_set: Optional[Iterable[str]] = None) -> "Dataset":
        examples = list(examples)
        if label_set is None:
            label_set = sorted({label for _, label in examples})
        return Dataset(examples, tuple(label_set))


# --- candidate splits -------------------------------------------------------

@dataclass(frozen=True)
class CategoricalSplit:
    feature: str
    values: tuple[str, ...]  # distinct values present, sorted

    def partition(self, examples: list[Example]) -> list[list[Example]]:
        parts: dict[str, list[Example]] = {v: [] for v in self.values}
        for ex in examples:
            value = ex[0].get(self.feature)
            if value in parts:
                parts[value].append(ex)
        return [parts[v] for v in self.values]


@dataclass(frozen=True)
class BooleanSplit:
    feature: str

    def partition(self, examples: list[Example]) -> list[list[Example]]:
        false_part: list[Example] = []
        true_part: list[Example] = []
        for ex in examples:
            value = ex[0].get(self.feature)
            if value is True:
                true_part.append(ex)
            elif value is False:
                false_part.append(ex)
        return [false_part, true_part]


@dataclass(frozen=True)
class NumericSplit:
    feature: str
    threshold: float

    def partition(self, examples: list[Example]) -> list[list[Example]]:
        le_part: list[Example] = []
        gt_part: list[Example] = []
        for ex in examples:
            value = ex[0].get(self.feature)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                continue
            (le_part if value <= self.threshold else gt_part).append(ex)
        return [le_part, gt_part]


Split = Union[CategoricalSplit, BooleanSplit, NumericSplit]


def entropy(labels: Iterable[str]) -> float:
    counts = Counter(labels)
    total = sum(counts.values())
    if total == 0:
        return 0.0
    result = 0.0
    for count in counts.values():
        p = count / total
        result -= p * math.log2(p)
    return result


def _partition_entropy(sizes: list[int]) -> float:
    total = sum(sizes)
    result = 0.0
    for size in sizes:
        if size:
            p = size / total
            result -= p * math.log2(p)
    return result


def information_gain(examples: list[Example], split: Split) -> float:
    """Raw information gain of a split, base-2, over present-valued examples."""
    parts = split.partition(examples)
    covered = [ex for part in parts for ex in part]
    if not covered:
        return 0.0
    parent = entropy(label for _, label in covered)
    total = len(covered)
    weighted = sum(len(part) / total * entropy(label for _, label in part)
                   for part in parts if part)
    return parent - weighted


def gain_ratio(examples: list[Example], split: Split) -> float:
    """Information gain normalized by the entropy of the partition sizes."""
    parts = split.partition(examples)
    sizes = [len(part) for part in parts]
    if sum(1 for s in sizes if s) < 2:
        raise UndefinedSplit(f"{split} leaves a single nonempty part")
    split_info = _partition_entropy(sizes)
    if split_info <= 0.0:
        raise UndefinedSplit(f"{split} has zero split information")
    return information_gain(examples, split) / split_info


def candidate_splits(examples: list[Example], feature: str) -> list[Split]:
    """All candidate splits of a feature over the given examples."""
    values = [ex[0][feature] for ex in examples if feature in ex[0]
              and ex[0][feature] is not None]
    if not values:
        return []
    sample = values[0]
    if isinstance(sample, bool):
        present = {bool(v) for v in values}
        return [BooleanSplit(feature)] if len(present) == 2 else []
    if isinstance(sample, (int, float)):
        distinct = sorted(set(float(v) for v in values))
        return [NumericSplit(feature, (lo + hi) / 2.0)
                for lo, hi in zip(distinct, distinct[1:])]
    distinct_cat = tuple(sorted(set(str(v) for v in values)))
    if len(distinct_cat) < 2:
        return []
    return [CategoricalSplit(feature, distinct_cat)]


# --- tree nodes -------------------------------------------------------------

@dataclass
class Leaf:
    label: str
    support: int
    distribution: dict[str, int]

    @property
    def confidence(self) -> float:
        if self.support == 0:
            return 0.0
        return self.distribution.get(self.label, 0) / self.support


@dataclass
class SplitNode:
    feature: str
    kind: str  # "categorical" | "numeric" | "boolean"
    branch_keys: tuple[str, ...]
    children: list[Union["SplitNode", Leaf]]
    majority_index: int
    threshold: Optional[float] = None
    known_values: tuple[str, ...] = ()

    def route(self, fv: FeatureVector) -> int:
        value = fv.get(self.feature)
        if value is None:
            return self.majority_index
        if self.kind == "numeric":
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                return self.majority_index
            return 0 if value <= self.threshold else 1
        if self.kind == "boolean":
            if not isinstance(value, bool):
                return self.majority_index
            return 1 if value else 0
        value = str(value)
        try:
            return self.branch_keys.index(value)
        except ValueError:
            return self.majority_index


TreeNode = Union[SplitNode, Leaf]


def _majority_label(counts: Counter, global_counts: Counter) -> str:
    best = max(counts.values())
    tied = [label for label, count in counts.items() if count == best]
    if len(tied) == 1:
        return tied[0]
    tied.sort(key=lambda lb: (-global_counts.get(lb, 0), lb))
    return tied[0]


def train_c45(dataset: Dataset, min_examples: int = 10) -> TreeNode:
    """Grow a C4.5 tree; the classic cutoff of 10 examples is the default."""
    if not dataset.examples:
        raise ValueError("training requires a nonempty dataset")
    global_counts = Counter(label for _, label in dataset.examples)
    feature_names = sorted({name for fv, _ in dataset.examples
                            for name in fv})
    return _grow(dataset.examples, feature_names, min_examples, global_counts)


def _grow(examples: list[Example], feature_names: list[str],
          min_examples: int, global_counts: Counter) -> TreeNode:
    counts = Counter(label for _, label in examples)
    if len(examples) < min_examples or len(counts) == 1:
        return _leaf(counts, global_counts)

    best_ratio = -1.0
    best_split: Optional[Split] = None
    for feature in feature_names:
        for split in candidate_splits(examples, feature):
            parts = split.partition(examples)
            if sum(1 for p in parts if p) < 2:
                continue
            gain = information_gain(examples, split)
            if gain <= _EPS:
                continue
            ratio = gain / _partition_entropy([len(p) for p in parts])
            if ratio > best_ratio + _EPS:
                best_ratio = ratio
                best_split = split

    if best_split is None:
        return _leaf(counts, global_counts)

    parts = best_split.partition(examples)
    routed = {id(ex) for part in parts for ex in part}
    sizes = [len(p) for p in parts]
    majority_index = sizes.index(max(sizes))
    for ex in examples:  # missing values follow the majority child
        if id(ex) not in routed:
            parts[majority_index].append(ex)

    children = [_grow(part, feature_names, min_examples, global_counts)
                for part in parts]
    if isinstance(best_split, CategoricalSplit):
        return SplitNode(feature=best_split.feature, kind="categorical",
                         branch_keys=best_split.values, children=children,
                         majority_index=majority_index,
                         known_values=best_split.values)
    if isinstance(best_split, BooleanSplit):
        return SplitNode(feature=best_split.feature, kind="boolean",
                         branch_keys=("false", "true"), children=children,
                         majority_index=majority_index)
    return SplitNode(feature=best_split.feature, kind="numeric",
                     branch_keys=("le", "gt"), children=children,
                     majority_index=majority_index,
                     threshold=best_split.threshold)


def _leaf(counts: Counter, global_counts: Counter) -> Leaf:
    label = _majority_label(counts, global_counts)
    return Leaf(label=label, support=sum(counts.values()),
                distribution=dict(sorted(counts.items())))


def classify_node(node: TreeNode, fv: FeatureVector) -> tuple[str, float]:
    while isinstance(node, SplitNode):
        node = node.children[node.route(fv)]
    return node.label, node.confidence


def tree_nodes(node: TreeNode) -> Iterable[TreeNode]:
    yield node
    if isinstance(node, SplitNode):
        for child in node.children:
            yield from tree_nodes(child)


def tree_depth(node: TreeNode) -> int:
    if isinstance(node, Leaf):
        return 1
    return 1 + max(tree_depth(child) for child in node.children)


# --- if-then rules -----------------------------------------------------------

@dataclass(frozen=True)
class RuleTest:
    feature: str
    kind: str  # "categorical" | "numeric" | "boolean"
    op: str  # "eq" | "le" | "gt"
    operand: Optional[Union[str, float, bool]]
    catches_fallback: bool  # missing / unseen values match this branch
    known_values: tuple[str, ...] = ()

    def matches(self, fv: FeatureVector) -> bool:
        value = fv.get(self.feature)
        if self.kind == "numeric":
            if value is None or isinstance(value, bool) \
                    or not isinstance(value, (int, float)):
                return self.catches_fallback
            return value <= self.operand if self.op == "le" \
                else value > self.operand
        if self.kind == "boolean":
            if not isinstance(value, bool):
                return self.catches_fallback
            return value is self.operand
        if value is None or str(value) not in self.known_values:
            return self.catches_fallback
        return str(value) == self.operand

    def render(self) -> str:
        if self.kind == "numeric":
            op = "<=" if self.op == "le" else ">"
            text = f"{self.feature} {op} {self.operand:g}"
        elif self.kind == "boolean":
            text = f"{self.feature} is {'true' if self.operand else 'false'}"
        else:
            text = f"{self.feature} == {self.operand}"
        if self.catches_fallback:
            text += " [or missing]"
        return text


@dataclass(frozen=True)
class Rule:
    tests: tuple[RuleTest, ...]
    label: str
    support: int
    confidence: float

    def matches(self, fv: FeatureVector) -> bool:
        return all(test.matches(fv) for test in self.tests)

    def render(self) -> str:
        if not self.tests:
            cond = "TRUE"
        else:
            cond = " AND ".join(test.render() for test in self.tests)
        return (f"IF {cond} THEN {self.label}"
                f"  (support={self.support}, confidence={self.confidence:.2f})")


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[Rule, ...]

    def classify(self, fv: FeatureVector) -> tuple[str, float]:
        for rule in self.rules:
            if rule.matches(fv):
                return rule.label, rule.confidence
        raise RuntimeError("rule set is not exhaustive")  # unreachable

    def render(self) -> str:
        return "\n".join(rule.render() for rule in self.rules)


def to_rules(node: TreeNode) -> RuleSet:
    """One rule per leaf; evaluation order mirrors a left-to-right walk."""
    rules: list[Rule] = []

    def walk(current: TreeNode, tests: tuple[RuleTest, ...]) -> None:
        if isinstance(current, Leaf):
            rules.append(Rule(tests=tests, label=current.label,
                              support=current.support,
                              confidence=current.confidence))
            return
        for index, child in enumerate(current.children):
            fallback = index == current.majority_index
            if current.kind == "numeric":
                test = RuleTest(current.feature, "numeric",
                                "le" if index == 0 else "gt",
                                current.threshold, fallback)
            elif current.kind == "boolean":
                test = RuleTest(current.feature, "boolean", "eq",
                                index == 1, fallback)
            else:
                test = RuleTest(current.feature, "categorical", "eq",
                                current.branch_keys[index], fallback,
                                current.known_values)
            walk(child, tests + (test,))

    walk(node, ())
    return RuleSet(tuple(rules))


# --- persistence --------------------------------------------------------------

@dataclass
class DecisionTreeModel:
    """A trained tree plus the schema needed to rebuild its inputs."""

    root: TreeNode
    labels: tuple[str, ...]
    feature_schema: dict[str, str]  # name -> categorical|numeric|boolean
    task: str = ""
    min_examples: int = 10
    training_size: int = 0
    label_counts: dict[str, int] = field(default_factory=dict)

    def classify(self, fv: FeatureVector) -> tuple[str, float]:
        return classify_node(self.root, fv)

    def rules(self) -> RuleSet:
        return to_rules(self.root)

    def feature_names(self) -> set[str]:
        return set(self.feature_schema)

    def used_features(self) -> set[str]:
        return {n.feature for n in tree_nodes(self.root)
                if isinstance(n, SplitNode)}

    def check_features(self, available: Iterable[str]) -> None:
        missing = self.used_features() - set(available)
        if missing:
            raise ModelFeatureMismatch(
                f"model tests unknown features: {sorted(missing)}")

    def node_count(self) -> int:
        return sum(1 for _ in tree_nodes(self.root))

    def depth(self) -> int:
        return tree_depth(self.root)

    def to_json(self) -> dict:
        return {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "task": self.task,
            "labels": list(self.labels),
            "features": dict(sorted(self.feature_schema.items())),
            "min_examples": self.min_examples,
            "training": {"examples": self.training_size,
                         "label_counts": dict(sorted(
                             self.label_counts.items()))},
            "tree": _node_to_json(self.root),
        }

    @staticmethod
    def from_json(obj: dict) -> "DecisionTreeModel":
        if obj.get("format") != MODEL_FORMAT:
            raise ValueError("not a decision-tree model document")
        if obj.get("version") != MODEL_VERSION:
            raise ValueError(f"unsupported model version: {obj.get('version')}")
        return DecisionTreeModel(
            root=_node_from_json(obj["tree"]),
            labels=tuple(obj["labels"]),
            feature_schema=dict(obj["features"]),
            task=obj.get("task", ""),
            min_examples=obj.get("min_examples", 10),
            training_size=obj.get("training", {}).get("examples", 0),
            label_counts=obj.get("training", {}).get("label_counts", {}),
        )

    def save(self, path: Path, rules_path: Optional[Path] = None) -> None:
        path = Path(path)
        path.write_text(json.dumps(self.to_json(), indent=2, sort_keys=False)
                        + "\n", encoding="utf-8")
        if rules_path is None:
            rules_path = path.with_suffix(".rules.txt")
        rules_path.write_text(self.rules().render() + "\n", encoding="utf-8")

    @staticmethod
    def load(path: Path) -> "DecisionTreeModel":
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
        return DecisionTreeModel.from_json(obj)


def train_model(dataset: Dataset, task: str = "",
                min_examples: int = 10) -> DecisionTreeModel:
    """train_c45 plus the bookkeeping needed for a model file."""
    root = train_c45(dataset, min_examples=min_examples)
    schema: dict[str, str] = {}
    for fv, _ in dataset.examples:
        for name, value in fv.items():
            if name in schema or value is None:
                continue
            if isinstance(value, bool):
                schema[name] = "boolean"
            elif isinstance(value, (int, float)):
                schema[name] = "numeric"
            else:
                schema[name] = "categorical"
    counts = Counter(label for _, label in dataset.examples)
    return DecisionTreeModel(
        root=root,
        labels=dataset.label_set,
        feature_schema=schema,
        task=task,
        min_examples=min_examples,
        training_size=len(dataset.examples),
        label_counts=dict(sorted(counts.items())),
    )


def _node_to_json(node: TreeNode) -> dict:
    if isinstance(node, Leaf):
        return {"type": "leaf", "label": node.label, "support": node.support,
                "dist": node.distribution}
    out: dict = {
        "type": "split",
        "feature": node.feature,
        "kind": node.kind,
        "majority": node.majority_index,
        "branches": {key: _node_to_json(child)
                     for key, child in zip(node.branch_keys, node.children)},
        "branch_order": list(node.branch_keys),
    }
    if node.threshold is not None:
        out["threshold"] = node.threshold
    return out


def _node_from_json(obj: dict) -> TreeNode:
    if obj["type"] == "leaf":
        return Leaf(label=obj["label"], support=obj["support"],
                    distribution=obj.get("dist") or {})
    keys = tuple(obj["branch_order"])
    children = [_node_from_json(obj["branches"][key]) for key in keys]
    kind = obj["kind"]
    return SplitNode(
        feature=obj["feature"],
        kind=kind,
        branch_keys=keys,
        children=children,
        majority_index=obj["majority"],
        threshold=obj.get("threshold"),
        known_values=keys if kind == "categorical" else (),
    )
