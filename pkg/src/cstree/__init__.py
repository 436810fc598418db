"""Cost-sensitive decision trees on numeric data.

Splits are scored by gain ratio weighted with per-attribute test costs
raised to a non-positive exponent, grown trees are post-pruned wherever
a majority leaf is cheaper than the subtree it replaces, and a grid of
exponents competes for the lowest training cost.
"""

from .competition import (
    LambdaGrid,
    LambdaRecord,
    SweepResult,
    run_competition,
    win_counts,
    with_test_costs,
)
from .costs import (
    CostDistributionSpec,
    MisclassificationMatrix,
    TestCostVector,
    generate_test_costs,
    load_cost_file,
    total_test_cost,
    two_class_matrix,
)
from .data import Dataset, InstanceSubset, load_csv, split_train_test
from .evaluation import (
    CostBreakdown,
    average_cost,
    average_reduction_ratio,
    reduction_ratio,
)
from .experiment import (
    DEFAULT_MC,
    ExperimentConfig,
    TrialReportRow,
    report_summary,
    run_experiment,
    trial_streams,
    write_rows_csv,
    write_summary_json,
    write_trace_csv,
)
from .pruning import PruneTraceEntry, leaf_replacement_cost, post_prune, subtree_cost
from .tree import (
    DecisionTree,
    SplitCandidate,
    TreeNode,
    attach_instances,
    best_split,
    build_tree,
    candidate_thresholds,
    classify,
    deserialize,
    entropy,
    gain_ratio,
    serialize,
    split_heuristic,
    split_statistics,
    structural_equal,
)

__version__ = "0.1.0"

__all__ = [
    "CostBreakdown",
    "CostDistributionSpec",
    "Dataset",
    "DecisionTree",
    "DEFAULT_MC",
    "ExperimentConfig",
    "InstanceSubset",
    "LambdaGrid",
    "LambdaRecord",
    "MisclassificationMatrix",
    "PruneTraceEntry",
    "SplitCandidate",
    "SweepResult",
    "TestCostVector",
    "TreeNode",
    "TrialReportRow",
    "attach_instances",
    "average_cost",
    "average_reduction_ratio",
    "best_split",
    "build_tree",
    "candidate_thresholds",
    "classify",
    "deserialize",
    "entropy",
    "gain_ratio",
    "generate_test_costs",
    "leaf_replacement_cost",
    "load_cost_file",
    "load_csv",
    "post_prune",
    "reduction_ratio",
    "report_summary",
    "run_competition",
    "run_experiment",
    "serialize",
    "split_heuristic",
    "split_statistics",
    "split_train_test",
    "structural_equal",
    "subtree_cost",
    "total_test_cost",
    "trial_streams",
    "two_class_matrix",
    "win_counts",
    "with_test_costs",
    "write_rows_csv",
    "write_summary_json",
    "write_trace_csv",
]
