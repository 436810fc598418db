"""Competition over a grid of cost exponents.

One tree is grown per exponent, optionally post-pruned, and the tree
with the lowest average cost on its own training rows wins. Ties go to
the largest exponent, the mildest cost weighting that achieves the
minimum.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .costs import MisclassificationMatrix, TestCostVector
from .data import InstanceSubset
from .evaluation import CostBreakdown, average_cost
from .pruning import post_prune
from .tree import DEFAULT_MIN_LEAF, DecisionTree, build_tree

__all__ = [
    "LambdaGrid",
    "LambdaRecord",
    "SweepResult",
    "run_competition",
    "with_test_costs",
    "win_counts",
]

_GRID_TOLERANCE = 1e-9


@dataclass(frozen=True)
class LambdaGrid:
    """Evenly spaced exponents from start up to end, both included."""

    start: float = -4.0
    end: float = 0.0
    step: float = 0.25

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.start > self.end:
            raise ValueError("start must not exceed end")
        if self.end > 0:
            raise ValueError("exponents must be zero or negative")
        span = self.end - self.start
        count = round(span / self.step)
        if abs(count * self.step - span) > _GRID_TOLERANCE:
            raise ValueError("end - start must be a whole number of steps")

    def values(self) -> tuple[float, ...]:
        count = round((self.end - self.start) / self.step)
        points = [self.start + i * self.step for i in range(count)]
        points.append(self.end)
        return tuple(points)


@dataclass(frozen=True)
class LambdaRecord:
    """One competitor: its exponent, tree, and measured costs."""

    lam: float
    tree: DecisionTree
    train_cost: CostBreakdown
    test_cost: CostBreakdown | None = None


@dataclass(frozen=True)
class SweepResult:
    records: tuple[LambdaRecord, ...]
    winner_lambda: float
    winner_tree: DecisionTree

    def record_for(self, lam: float) -> LambdaRecord:
        for record in self.records:
            if record.lam == lam:
                return record
        raise ValueError(f"no record for exponent {lam}")


def run_competition(
    train: InstanceSubset,
    tc: TestCostVector,
    mc: MisclassificationMatrix,
    grid: LambdaGrid | None = None,
    prune: bool = True,
    min_leaf_size: int = DEFAULT_MIN_LEAF,
    prune_on_tie: bool = False,
) -> SweepResult:
    """Grow (and optionally prune) one tree per grid exponent and pick the
    winner by training average cost. Deterministic given its inputs."""
    grid = grid or LambdaGrid()
    records = []
    winner: LambdaRecord | None = None
    for lam in grid.values():
        tree = build_tree(train, tc, lam, min_leaf_size)
        if prune:
            tree, _ = post_prune(tree, tc, mc, prune_on_tie)
        cost = average_cost(tree, train, tc, mc)
        record = LambdaRecord(lam=lam, tree=tree, train_cost=cost)
        records.append(record)
        # <= so an exact tie moves the win to the larger exponent
        if winner is None or record.train_cost.average <= winner.train_cost.average:
            winner = record
    return SweepResult(
        records=tuple(records), winner_lambda=winner.lam, winner_tree=winner.tree
    )


def with_test_costs(
    result: SweepResult,
    test: InstanceSubset,
    tc: TestCostVector,
    mc: MisclassificationMatrix,
) -> SweepResult:
    """Copy of a sweep with every record's cost on held-out rows filled in."""
    records = tuple(
        replace(record, test_cost=average_cost(record.tree, test, tc, mc))
        for record in result.records
    )
    return SweepResult(
        records=records,
        winner_lambda=result.winner_lambda,
        winner_tree=result.winner_tree,
    )


def win_counts(results) -> dict[float, int]:
    """How often each exponent's tree reaches the minimal test cost.

    Every exponent tied at the minimum of a sweep earns one win, so the
    counts can sum to more than the number of sweeps.
    """
    results = list(results)
    if not results:
        raise ValueError("need at least one sweep result")
    grid = tuple(record.lam for record in results[0].records)
    counts = {lam: 0 for lam in grid}
    for result in results:
        if tuple(record.lam for record in result.records) != grid:
            raise ValueError("all sweeps must share one exponent grid")
        averages = []
        for record in result.records:
            if record.test_cost is None:
                raise ValueError("every record needs a test cost; run with_test_costs")
            averages.append(record.test_cost.average)
        lowest = min(averages)
        for lam, average in zip(grid, averages):
            if average == lowest:
                counts[lam] += 1
    return counts
