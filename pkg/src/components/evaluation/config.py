# Experiment defaults
class GridDefaults:
    SEED = 42
    REPS = 5
    REPLICATES = 10
    ABLATION_K = (0, 1, 2, 4, 8, 16)


# Report files inside a run directory
class ReportFiles:
    CONFIG = "config.json"
    RESULTS_TEMPLATE = "results_{arm}.csv"
    SUMMARY_CSV = "summary.csv"
    SUMMARY_MD = "summary.md"
    ABLATION = "ablation.csv"
    ABLATION_REPLICATES = "ablation_replicates.csv"
    TRAJECTORIES = "trajectories.jsonl"
    PARTIAL = "PARTIAL"
    HASH_LENGTH = 12
    LINE_TERMINATOR = "\n"


# Column names of the CSV reports
class ReportColumns:
    RESULTS = ["replicate", "task_id", "rep", "success", "steps"]
    SUMMARY = ["arm", "replicate", "accuracy", "best_of_n", "reliability", "avg_steps"]
    ABLATION = ["k", "accuracy"]
    ABLATION_REPLICATES = ["k", "replicate", "accuracy"]


ARM_TITLES = {
    "base": "Base",
    "memory": "With memory",
    "optimal": "Optimal",
}

EPISODE_ORDER_NOTE = (
    "Episodes run task-major, rep-minor; the memory arm ingests each episode "
    "before the next one starts."
)
