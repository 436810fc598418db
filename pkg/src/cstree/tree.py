"""Binary threshold trees grown by cost-weighted gain ratio.

A split on attribute a is scored as gain_ratio * tc(a) ** lam with
lam <= 0, so cheap attributes are preferred and the penalty grows as lam
falls. An attribute already tested higher up the same path is re-scored
with weight 1: its outcome is already paid for, so re-testing it costs
nothing new and the score degenerates to the plain gain ratio.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .costs import TestCostVector
from .data import InstanceSubset

__all__ = [
    "TreeNode",
    "DecisionTree",
    "SplitCandidate",
    "entropy",
    "split_statistics",
    "gain_ratio",
    "candidate_thresholds",
    "split_heuristic",
    "best_split",
    "build_tree",
    "classify",
    "serialize",
    "deserialize",
    "attach_instances",
    "structural_equal",
]

# Split information below this floor is treated as no split at all; it
# guards the gain / split_info division against degenerate partitions.
MIN_SPLIT_INFO = 1e-12

DEFAULT_MIN_LEAF = 2


def entropy(histogram) -> float:
    """Shannon entropy, in bits, of a vector of class counts."""
    counts = np.asarray(histogram, dtype=np.float64)
    if counts.ndim != 1 or counts.size == 0 or (counts < 0).any():
        raise ValueError("histogram must be a 1-D vector of nonnegative counts")
    total = counts.sum()
    if total <= 0:
        raise ValueError("histogram must count at least one instance")
    probs = counts[counts > 0] / total
    return float(-(probs * np.log2(probs)).sum()) + 0.0


def split_statistics(subset: InstanceSubset, attribute: int, threshold: float):
    """Information gain and split information for one threshold test.

    Rounding can push a mathematically zero gain a hair negative, so the
    gain is clamped at zero.
    """
    left, right = subset.partition(attribute, threshold)
    if len(left) == 0 or len(right) == 0:
        raise ValueError("threshold must place at least one instance on each side")
    n = len(subset)
    gain = (
        entropy(subset.class_histogram())
        - (len(left) / n) * entropy(left.class_histogram())
        - (len(right) / n) * entropy(right.class_histogram())
    )
    split_info = entropy(np.array([len(left), len(right)], dtype=np.float64))
    return max(gain, 0.0), split_info


def gain_ratio(subset: InstanceSubset, attribute: int, threshold: float) -> float:
    """Information gain normalised by the entropy of the subset sizes."""
    gain, split_info = split_statistics(subset, attribute, threshold)
    if split_info < MIN_SPLIT_INFO:
        return 0.0
    return gain / split_info


def candidate_thresholds(subset: InstanceSubset, attribute: int) -> list[float]:
    """Midpoints between consecutive distinct sorted values of one column."""
    if len(subset) == 0:
        raise ValueError("cannot enumerate thresholds of an empty subset")
    distinct = np.unique(subset.values(attribute))
    mids = (distinct[:-1] + distinct[1:]) / 2.0
    return [float(m) for m in mids]


def split_heuristic(
    gain_ratio_value: float, attribute_cost: float, lam: float, already_tested: bool
) -> float:
    """Score of one candidate split: gain ratio times cost ** lam.

    A repeated test on the current path carries weight 1 regardless of its
    price, because the value is already known there.
    """
    if lam > 0:
        raise ValueError("the cost exponent must be zero or negative")
    if attribute_cost <= 0:
        raise ValueError("attribute test cost must be positive")
    if already_tested:
        return float(gain_ratio_value)
    return float(gain_ratio_value * attribute_cost**lam)


@dataclass(frozen=True)
class SplitCandidate:
    attribute: int
    threshold: float
    gain_ratio: float
    heuristic_value: float


def _xlog2x(values: np.ndarray) -> np.ndarray:
    out = np.zeros_like(values, dtype=np.float64)
    np.log2(values, out=out, where=values > 0)
    out *= values
    return out


def _entropy_rows(count_rows: np.ndarray) -> np.ndarray:
    # log2(T) - sum(c * log2 c) / T per row; rows must have positive totals
    totals = count_rows.sum(axis=1)
    return np.log2(totals) - _xlog2x(count_rows).sum(axis=1) / totals


def _scan_attribute(values, label_matrix, h_parent, min_leaf_size):
    """Vectorised threshold scan of one column.

    Returns (thresholds, gains, split_infos) over the boundaries between
    distinct consecutive sorted values whose children both hold at least
    min_leaf_size instances, or None when no such boundary exists.
    """
    order = np.argsort(values, kind="stable")
    sv = values[order]
    n = sv.shape[0]
    boundary = np.nonzero(sv[:-1] < sv[1:])[0]
    if boundary.size == 0:
        return None
    n_left = (boundary + 1).astype(np.float64)
    n_right = n - n_left
    keep = (n_left >= min_leaf_size) & (n_right >= min_leaf_size)
    if not keep.any():
        return None
    boundary = boundary[keep]
    n_left = n_left[keep]
    n_right = n_right[keep]
    cum = label_matrix[order].cumsum(axis=0)
    left_counts = cum[boundary]
    right_counts = cum[-1] - left_counts
    h_left = _entropy_rows(left_counts)
    h_right = _entropy_rows(right_counts)
    gains = np.maximum(h_parent - (n_left * h_left + n_right * h_right) / n, 0.0)
    split_infos = math.log2(n) - (_xlog2x(n_left) + _xlog2x(n_right)) / n
    thresholds = (sv[boundary] + sv[boundary + 1]) / 2.0
    return thresholds, gains, split_infos


def best_split(
    subset: InstanceSubset,
    tc: TestCostVector,
    lam: float,
    tested_on_path: frozenset[int] = frozenset(),
    min_leaf_size: int = DEFAULT_MIN_LEAF,
) -> SplitCandidate | None:
    """Highest-scoring admissible (attribute, threshold) pair, or None.

    Admission requires positive gain, split information above the floor,
    and both children at least min_leaf_size. Ties break toward the lowest
    attribute index, then the lowest threshold.
    """
    if lam > 0:
        raise ValueError("the cost exponent must be zero or negative")
    if min_leaf_size < 1:
        raise ValueError("min_leaf_size must be at least 1")
    if len(tc) != subset.dataset.num_attributes:
        raise ValueError("one test cost per attribute is required")
    n = len(subset)
    hist = subset.class_histogram()
    if n < 2 * min_leaf_size or int((hist > 0).sum()) <= 1:
        return None
    h_parent = entropy(hist)
    labels = subset.labels
    label_matrix = np.zeros((n, subset.dataset.num_classes), dtype=np.float64)
    label_matrix[np.arange(n), labels] = 1.0
    best: tuple[float, int, float, float] | None = None
    for a in range(subset.dataset.num_attributes):
        scan = _scan_attribute(subset.values(a), label_matrix, h_parent, min_leaf_size)
        if scan is None:
            continue
        thresholds, gains, split_infos = scan
        admissible = (gains > 0.0) & (split_infos >= MIN_SPLIT_INFO)
        if not admissible.any():
            continue
        ratios = np.divide(
            gains, split_infos, out=np.zeros_like(gains), where=admissible
        )
        weight = split_heuristic(1.0, tc.cost(a), lam, a in tested_on_path)
        scores = np.where(admissible, ratios * weight, -np.inf)
        i = int(np.argmax(scores))
        if best is None or scores[i] > best[0]:
            best = (float(scores[i]), a, float(thresholds[i]), float(ratios[i]))
    if best is None:
        return None
    return SplitCandidate(
        attribute=best[1], threshold=best[2], gain_ratio=best[3], heuristic_value=best[0]
    )


@dataclass(eq=False)
class TreeNode:
    """One tree node; a leaf when ``attribute`` is None.

    Every node remembers the training rows that reached it and their class
    histogram. ``subset`` is None on structure-only trees read back from
    JSON until training rows are attached.
    """

    histogram: np.ndarray
    subset: InstanceSubset | None = None
    attribute: int | None = None
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    predicted_class: int | None = None

    @property
    def is_leaf(self) -> bool:
        return self.attribute is None


@dataclass(eq=False)
class DecisionTree:
    """A grown tree plus the exponent and test costs that grew it."""

    root: TreeNode
    lambda_used: float
    tc_used: TestCostVector

    def node_count(self) -> int:
        def count(node):
            if node.is_leaf:
                return 1
            return 1 + count(node.left) + count(node.right)

        return count(self.root)

    def leaf_count(self) -> int:
        def count(node):
            if node.is_leaf:
                return 1
            return count(node.left) + count(node.right)

        return count(self.root)

    def internal_nodes(self) -> int:
        return self.node_count() - self.leaf_count()


def _leaf_from(subset: InstanceSubset) -> TreeNode:
    hist = subset.class_histogram()
    return TreeNode(
        histogram=hist, subset=subset, predicted_class=int(np.argmax(hist))
    )


def _grow(subset, tc, lam, tested_on_path, min_leaf_size) -> TreeNode:
    if subset.is_pure() or len(subset) < 2 * min_leaf_size:
        return _leaf_from(subset)
    candidate = best_split(subset, tc, lam, tested_on_path, min_leaf_size)
    if candidate is None:
        return _leaf_from(subset)
    left, right = subset.partition(candidate.attribute, candidate.threshold)
    deeper = tested_on_path | {candidate.attribute}
    return TreeNode(
        histogram=subset.class_histogram(),
        subset=subset,
        attribute=candidate.attribute,
        threshold=candidate.threshold,
        left=_grow(left, tc, lam, deeper, min_leaf_size),
        right=_grow(right, tc, lam, deeper, min_leaf_size),
    )


def build_tree(
    train: InstanceSubset,
    tc: TestCostVector,
    lam: float,
    min_leaf_size: int = DEFAULT_MIN_LEAF,
) -> DecisionTree:
    """Grow a tree on the training rows with exponent ``lam`` <= 0.

    Growth stops at pure subsets, at subsets too small to split into two
    children of min_leaf_size, and where no candidate has positive gain.
    Attributes may be re-tested deeper down with new thresholds.
    """
    if len(train) == 0:
        raise ValueError("cannot grow a tree from an empty training set")
    if lam > 0:
        raise ValueError("the cost exponent must be zero or negative")
    if len(tc) != train.dataset.num_attributes:
        raise ValueError("one test cost per attribute is required")
    root = _grow(train, tc, float(lam), frozenset(), min_leaf_size)
    return DecisionTree(root=root, lambda_used=float(lam), tc_used=tc)


def classify(tree: DecisionTree, instance) -> tuple[int, frozenset[int]]:
    """Predict one feature vector; also report the distinct attributes tested."""
    x = np.asarray(instance, dtype=np.float64)
    if x.shape != (len(tree.tc_used),):
        raise ValueError(f"expected a vector of {len(tree.tc_used)} features, got shape {x.shape}")
    node = tree.root
    tested: set[int] = set()
    while not node.is_leaf:
        tested.add(node.attribute)
        node = node.left if x[node.attribute] <= node.threshold else node.right
    return int(node.predicted_class), frozenset(tested)


def structural_equal(a: DecisionTree, b: DecisionTree) -> bool:
    """Same shape, tests, thresholds, predictions, and histograms."""

    def eq(x: TreeNode, y: TreeNode) -> bool:
        if x.is_leaf != y.is_leaf:
            return False
        if list(x.histogram) != list(y.histogram):
            return False
        if x.is_leaf:
            return x.predicted_class == y.predicted_class
        return (
            x.attribute == y.attribute
            and x.threshold == y.threshold
            and eq(x.left, y.left)
            and eq(x.right, y.right)
        )

    return eq(a.root, b.root)


def _node_to_json(node: TreeNode):
    if node.is_leaf:
        return {
            "leaf": int(node.predicted_class),
            "histogram": [int(c) for c in node.histogram],
        }
    return {
        "attribute": int(node.attribute),
        "threshold": float(node.threshold),
        "left": _node_to_json(node.left),
        "right": _node_to_json(node.right),
    }


def serialize(tree: DecisionTree) -> str:
    """Render the tree as JSON: structure, thresholds at full precision,
    leaf histograms, the exponent, and the test costs."""
    doc = {
        "lambda": float(tree.lambda_used),
        "test_costs": [float(c) for c in tree.tc_used.costs],
        "root": _node_to_json(tree.root),
    }
    return json.dumps(doc, indent=2)


def _node_from_json(obj, num_attributes: int, leaf_width: list[int | None]) -> TreeNode:
    if not isinstance(obj, dict):
        raise ValueError("tree nodes must be JSON objects")
    keys = set(obj)
    if keys == {"leaf", "histogram"}:
        hist = obj["histogram"]
        if (
            not isinstance(hist, list)
            or not hist
            or not all(isinstance(c, int) and c >= 0 for c in hist)
        ):
            raise ValueError("leaf histogram must be a list of nonnegative integers")
        if leaf_width[0] is None:
            leaf_width[0] = len(hist)
        elif leaf_width[0] != len(hist):
            raise ValueError("all leaf histograms must have the same length")
        predicted = obj["leaf"]
        if not isinstance(predicted, int) or not 0 <= predicted < len(hist):
            raise ValueError("leaf class must index the histogram")
        arr = np.array(hist, dtype=np.int64)
        if predicted != int(np.argmax(arr)):
            raise ValueError("leaf class must be the majority of its histogram")
        return TreeNode(histogram=arr, predicted_class=predicted)
    if keys == {"attribute", "threshold", "left", "right"}:
        attribute = obj["attribute"]
        if not isinstance(attribute, int) or not 0 <= attribute < num_attributes:
            raise ValueError(f"attribute index must lie in [0, {num_attributes - 1}]")
        threshold = obj["threshold"]
        if not isinstance(threshold, (int, float)) or not math.isfinite(threshold):
            raise ValueError("threshold must be a finite number")
        left = _node_from_json(obj["left"], num_attributes, leaf_width)
        right = _node_from_json(obj["right"], num_attributes, leaf_width)
        return TreeNode(
            histogram=left.histogram + right.histogram,
            attribute=attribute,
            threshold=float(threshold),
            left=left,
            right=right,
        )
    raise ValueError(
        "node must have exactly the keys {leaf, histogram} or "
        "{attribute, threshold, left, right}"
    )


def deserialize(text: str) -> DecisionTree:
    """Parse a serialized tree; malformed input raises ValueError.

    The result is structure-only: nodes carry histograms but no training
    rows until attach_instances binds a dataset.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or set(doc) != {"lambda", "test_costs", "root"}:
        raise ValueError("top level must be an object with lambda, test_costs, root")
    lam = doc["lambda"]
    if not isinstance(lam, (int, float)) or lam > 0:
        raise ValueError("lambda must be a number <= 0")
    tc = TestCostVector(tuple(doc["test_costs"]))
    leaf_width: list[int | None] = [None]
    root = _node_from_json(doc["root"], len(tc), leaf_width)
    return DecisionTree(root=root, lambda_used=float(lam), tc_used=tc)


def attach_instances(tree: DecisionTree, data: InstanceSubset) -> DecisionTree:
    """Bind training rows to a tree by routing them through its tests.

    Returns a new tree whose nodes carry subsets and recomputed
    histograms. The rows must reproduce every stored leaf histogram
    exactly; a mismatch means the data is not the tree's training data.
    """
    if data.dataset.num_classes != len(tree.root.histogram):
        raise ValueError(
            f"tree counts {len(tree.root.histogram)} classes, data has "
            f"{data.dataset.num_classes}"
        )
    if data.dataset.num_attributes != len(tree.tc_used):
        raise ValueError("data and tree disagree on the number of attributes")

    def rebuild(node: TreeNode, sub: InstanceSubset) -> TreeNode:
        hist = sub.class_histogram()
        if node.is_leaf:
            if list(hist) != list(node.histogram):
                raise ValueError(
                    "routed rows do not reproduce the stored leaf histograms"
                )
            return TreeNode(
                histogram=hist, subset=sub, predicted_class=node.predicted_class
            )
        left, right = sub.partition(node.attribute, node.threshold)
        return TreeNode(
            histogram=hist,
            subset=sub,
            attribute=node.attribute,
            threshold=node.threshold,
            left=rebuild(node.left, left),
            right=rebuild(node.right, right),
        )

    return DecisionTree(
        root=rebuild(tree.root, data),
        lambda_used=tree.lambda_used,
        tc_used=tree.tc_used,
    )
