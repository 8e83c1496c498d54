"""
Experiment orchestration: configuration, synthetic benchmarks, paired trials,
significance testing and the expressiveness battery.
"""

from .config import DatasetSpec, ExperimentConfig, SplitConfig, SyntheticSpec
from .stats import MeanWithError, PairedTTest, mean_and_stderr, paired_t_test, t_cdf, two_sided_p
from .synthetic import block_probabilities, community_sizes, expected_edge_count, synth_homophily
from .reports import (
    CheckResult,
    ComparisonSummary,
    EvaluationReport,
    ExpressivenessReport,
    RunManifest,
    TrialRecord,
    TrialReport,
    TrialSeeds,
)
from .runner import (
    VARIANT_SOURCES,
    build_report,
    cmd_ablate,
    cmd_eval,
    cmd_run,
    cmd_synth,
    derive_seeds,
    execute_trial,
    load_experiment_graph,
)
from .expressiveness import cmd_expressiveness

__all__ = [
    "DatasetSpec",
    "ExperimentConfig",
    "SplitConfig",
    "SyntheticSpec",
    "MeanWithError",
    "PairedTTest",
    "mean_and_stderr",
    "paired_t_test",
    "t_cdf",
    "two_sided_p",
    "block_probabilities",
    "community_sizes",
    "expected_edge_count",
    "synth_homophily",
    "CheckResult",
    "ComparisonSummary",
    "EvaluationReport",
    "ExpressivenessReport",
    "RunManifest",
    "TrialRecord",
    "TrialReport",
    "TrialSeeds",
    "VARIANT_SOURCES",
    "build_report",
    "cmd_ablate",
    "cmd_eval",
    "cmd_run",
    "cmd_synth",
    "derive_seeds",
    "execute_trial",
    "load_experiment_graph",
    "cmd_expressiveness",
]
