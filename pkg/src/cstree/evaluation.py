"""Average classification cost and cost-reduction ratios."""

from __future__ import annotations

from dataclasses import dataclass

from .costs import MisclassificationMatrix, TestCostVector, total_test_cost
from .data import InstanceSubset
from .tree import DecisionTree, classify

__all__ = [
    "CostBreakdown",
    "average_cost",
    "reduction_ratio",
    "average_reduction_ratio",
]


@dataclass(frozen=True)
class CostBreakdown:
    """Total test cost, total misclassification cost, and their mean."""

    test_cost_total: float
    misclassification_total: float
    average: float
    count: int

    @classmethod
    def from_totals(cls, test_cost_total: float, misclassification_total: float, count: int):
        if count < 1:
            raise ValueError("a cost breakdown needs at least one instance")
        return cls(
            test_cost_total=float(test_cost_total),
            misclassification_total=float(misclassification_total),
            average=(test_cost_total + misclassification_total) / count,
            count=int(count),
        )


def average_cost(
    tree: DecisionTree,
    data: InstanceSubset,
    tc: TestCostVector,
    mc: MisclassificationMatrix,
) -> CostBreakdown:
    """Mean cost of classifying each row: distinct tests on its path plus
    the penalty of its predicted against its true class."""
    if len(data) == 0:
        raise ValueError("cannot average costs over an empty subset")
    if mc.num_classes != data.dataset.num_classes:
        raise ValueError("matrix classes and dataset classes differ")
    features = data.dataset.features
    labels = data.dataset.labels
    test_total = 0.0
    mc_total = 0.0
    for idx in data.indices:
        predicted, tested = classify(tree, features[idx])
        test_total += total_test_cost(tc, tested)
        mc_total += mc.cost(int(labels[idx]), predicted)
    return CostBreakdown.from_totals(test_total, mc_total, len(data))


def reduction_ratio(average_before: float, average_after: float) -> float:
    """Relative saving (before - after) / before."""
    if average_before <= 0:
        raise ValueError("the baseline average cost must be positive")
    if average_after < 0:
        raise ValueError("the reduced average cost cannot be negative")
    return (average_before - average_after) / average_before


def average_reduction_ratio(ratios) -> float:
    """Plain mean of per-exponent reduction ratios."""
    ratios = list(ratios)
    if not ratios:
        raise ValueError("need at least one ratio to average")
    return sum(ratios) / len(ratios)
