"""Repeatable trial harness and report writers.

A run makes ``trials`` independent passes over one dataset. Each trial
draws fresh test costs (unless a fixed cost file pins them), splits the
rows into train and test, grows one tree per grid exponent, optionally
prunes, and measures average costs on both sides of the split. Reports
are deterministic: rerunning a configuration reproduces the CSV and the
JSON summary byte for byte.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .competition import LambdaGrid
from .costs import (
    CostDistributionSpec,
    MisclassificationMatrix,
    generate_test_costs,
    load_cost_file,
    two_class_matrix,
)
from .data import load_csv, split_train_test
from .evaluation import average_cost, average_reduction_ratio, reduction_ratio
from .pruning import PruneTraceEntry, post_prune
from .tree import DEFAULT_MIN_LEAF, build_tree

__all__ = [
    "ExperimentConfig",
    "TrialReportRow",
    "trial_streams",
    "run_experiment",
    "report_summary",
    "write_rows_csv",
    "write_summary_json",
    "write_trace_csv",
    "DEFAULT_MC",
]

PRUNE_MODES = ("none", "post", "both")

# Used for two-class data whenever no matrix is supplied explicitly.
DEFAULT_MC = two_class_matrix(500.0, 50.0)

CSV_COLUMNS = (
    "trial",
    "lambda",
    "pruned",
    "train_avg_cost",
    "test_avg_cost",
    "tree_nodes",
    "reduction_ratio",
)

TRACE_COLUMNS = (
    "step",
    "attribute",
    "tc_keep",
    "mc_keep",
    "ac_keep",
    "tc_prune",
    "mc_prune",
    "ac_prune",
    "instances",
    "pruned",
)


def trial_streams(master_seed: int, trial: int):
    """Two independent generators for one trial, replayable in isolation.

    Streams are keyed by the tuple (master_seed, trial, purpose):
    purpose 0 draws test costs, purpose 1 draws the train/test split.
    """
    if master_seed < 0:
        raise ValueError("master seed must be nonnegative")
    if trial < 0:
        raise ValueError("trial index must be nonnegative")
    costs_rng = np.random.default_rng([master_seed, trial, 0])
    split_rng = np.random.default_rng([master_seed, trial, 1])
    return costs_rng, split_rng


@dataclass
class ExperimentConfig:
    """Everything a run needs; defaults follow the standard protocol."""

    data_path: str | Path
    label_column: str | None = None
    train_fraction: float = 0.6
    trials: int = 100
    seed: int = 0
    cost_spec: CostDistributionSpec = field(default_factory=CostDistributionSpec)
    cost_file: str | Path | None = None
    mc: MisclassificationMatrix | None = None
    grid: LambdaGrid = field(default_factory=LambdaGrid)
    prune_mode: str = "both"
    min_leaf_size: int = DEFAULT_MIN_LEAF
    prune_on_tie: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if self.prune_mode not in PRUNE_MODES:
            raise ValueError(f"prune_mode must be one of {PRUNE_MODES}")
        if self.min_leaf_size < 1:
            raise ValueError("min_leaf_size must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")


@dataclass(frozen=True)
class TrialReportRow:
    """One (trial, exponent, prune flag) measurement."""

    trial: int
    lam: float
    pruned: bool
    train_average: float
    test_average: float
    tree_nodes: int
    reduction: float | None = None


def run_experiment(config: ExperimentConfig):
    """Run all trials; returns (rows, summary)."""
    dataset = load_csv(config.data_path, config.label_column)
    fixed_tc = None
    file_mc = None
    if config.cost_file is not None:
        fixed_tc, file_mc = load_cost_file(config.cost_file)
    mc = config.mc or file_mc
    if mc is None:
        if dataset.num_classes != 2:
            raise ValueError(
                "a misclassification matrix is required for more than two classes"
            )
        mc = DEFAULT_MC
    if mc.num_classes != dataset.num_classes:
        raise ValueError("matrix classes and dataset classes differ")
    if fixed_tc is not None and len(fixed_tc) != dataset.num_attributes:
        raise ValueError("cost file length and attribute count differ")

    report_unpruned = config.prune_mode in ("none", "both")
    report_pruned = config.prune_mode in ("post", "both")
    rows: list[TrialReportRow] = []
    for trial in range(config.trials):
        costs_rng, split_rng = trial_streams(config.seed, trial)
        if fixed_tc is not None:
            tc = fixed_tc
        else:
            tc = generate_test_costs(config.cost_spec, dataset.num_attributes, costs_rng)
        train, test = split_train_test(dataset, config.train_fraction, split_rng)
        for lam in config.grid.values():
            tree = build_tree(train, tc, lam, config.min_leaf_size)
            before_train = average_cost(tree, train, tc, mc)
            if report_unpruned:
                rows.append(
                    TrialReportRow(
                        trial=trial,
                        lam=lam,
                        pruned=False,
                        train_average=before_train.average,
                        test_average=average_cost(tree, test, tc, mc).average,
                        tree_nodes=tree.node_count(),
                    )
                )
            if report_pruned:
                pruned_tree, _ = post_prune(tree, tc, mc, config.prune_on_tie)
                after_train = average_cost(pruned_tree, train, tc, mc)
                saved = None
                if config.prune_mode == "both":
                    if before_train.average > 0:
                        saved = reduction_ratio(before_train.average, after_train.average)
                    else:
                        # a tree that charges nothing has nothing to reduce
                        saved = 0.0
                rows.append(
                    TrialReportRow(
                        trial=trial,
                        lam=lam,
                        pruned=True,
                        train_average=after_train.average,
                        test_average=average_cost(pruned_tree, test, tc, mc).average,
                        tree_nodes=pruned_tree.node_count(),
                        reduction=saved,
                    )
                )
    summary = {
        "trials": config.trials,
        "seed": config.seed,
        "prune_mode": config.prune_mode,
        "class_mapping": [
            [index, name] for index, name in enumerate(dataset.class_names)
        ],
    }
    summary.update(report_summary(rows))
    return rows, summary


def _lam_key(lam: float) -> str:
    return repr(float(lam))


def _mode_stats(rows, lams, trials):
    by_trial = {trial: {} for trial in trials}
    for row in rows:
        if row.lam in by_trial[row.trial]:
            raise ValueError("duplicate row for one trial and exponent")
        by_trial[row.trial][row.lam] = row
    per_lambda = {}
    for lam in lams:
        column = [by_trial[trial][lam] for trial in trials]
        if len(column) != len(trials):
            raise ValueError("rows do not cover every trial and exponent")
        per_lambda[_lam_key(lam)] = {
            "mean_train_avg_cost": sum(r.train_average for r in column) / len(column),
            "mean_test_avg_cost": sum(r.test_average for r in column) / len(column),
            "mean_tree_nodes": sum(r.tree_nodes for r in column) / len(column),
        }
    counts = {_lam_key(lam): 0 for lam in lams}
    winner_hits = 0
    for trial in trials:
        trial_rows = by_trial[trial]
        if len(trial_rows) != len(lams):
            raise ValueError("rows do not cover every trial and exponent")
        lowest_test = min(r.test_average for r in trial_rows.values())
        for lam in lams:
            if trial_rows[lam].test_average == lowest_test:
                counts[_lam_key(lam)] += 1
        lowest_train = min(r.train_average for r in trial_rows.values())
        winner = max(lam for lam in lams if trial_rows[lam].train_average == lowest_train)
        if trial_rows[winner].test_average == lowest_test:
            winner_hits += 1
    return {
        "per_lambda": per_lambda,
        "win_counts": counts,
        "winner_comin_test_rate": winner_hits / len(trials),
    }


def report_summary(rows) -> dict:
    """Aggregate trial rows; everything here is recomputable from the CSV."""
    rows = list(rows)
    if not rows:
        raise ValueError("need at least one row")
    lams = sorted({row.lam for row in rows})
    trials = sorted({row.trial for row in rows})
    summary: dict = {"grid": lams, "modes": {}}
    unpruned = [row for row in rows if not row.pruned]
    pruned = [row for row in rows if row.pruned]
    if unpruned:
        summary["modes"]["unpruned"] = _mode_stats(unpruned, lams, trials)
    if pruned:
        summary["modes"]["pruned"] = _mode_stats(pruned, lams, trials)
    measured = [row for row in pruned if row.reduction is not None]
    if measured:
        per_lambda = {}
        for lam in lams:
            column = [row.reduction for row in measured if row.lam == lam]
            if column:
                per_lambda[_lam_key(lam)] = sum(column) / len(column)
        summary["reduction"] = {
            "per_lambda_mean": per_lambda,
            "average_reduction_ratio": average_reduction_ratio(per_lambda.values()),
        }
    return summary


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_rows_csv(rows, path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow(
                [
                    _cell(row.trial),
                    _cell(row.lam),
                    _cell(row.pruned),
                    _cell(row.train_average),
                    _cell(row.test_average),
                    _cell(row.tree_nodes),
                    _cell(row.reduction),
                ]
            )


def write_summary_json(summary: dict, path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")


def write_trace_csv(entries: list[PruneTraceEntry], path) -> None:
    """One row per pruning decision, in decision order."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for step, entry in enumerate(entries, start=1):
            writer.writerow(
                [
                    _cell(step),
                    _cell(entry.attribute),
                    _cell(entry.cost_keep.test_cost_total),
                    _cell(entry.cost_keep.misclassification_total),
                    _cell(entry.cost_keep.average),
                    _cell(entry.cost_prune.test_cost_total),
                    _cell(entry.cost_prune.misclassification_total),
                    _cell(entry.cost_prune.average),
                    _cell(entry.instance_count),
                    _cell(entry.pruned),
                ]
            )
