"""Experiment harness: grids of simulated episodes, metrics and reports"""

from .metrics import accuracy, avg_steps, best_of_n, reliability
from .report import emit_report, load_results_csv, results_frame, summary_markdown
from .schema import AblationCurve, Arm, ArmSummary, ExperimentResult, GridConfig, ResultsMatrix
from .service import (
    ablate_k,
    arm_means,
    build_policy,
    build_site,
    episode_seed,
    replicate_seed,
    run_experiment,
    run_grid,
    summarize,
    validate_k_values,
)

__all__ = [
    "AblationCurve",
    "Arm",
    "ArmSummary",
    "ExperimentResult",
    "GridConfig",
    "ResultsMatrix",
    "ablate_k",
    "accuracy",
    "arm_means",
    "avg_steps",
    "best_of_n",
    "build_policy",
    "build_site",
    "emit_report",
    "episode_seed",
    "load_results_csv",
    "reliability",
    "replicate_seed",
    "results_frame",
    "run_experiment",
    "run_grid",
    "summarize",
    "summary_markdown",
    "validate_k_values",
]
