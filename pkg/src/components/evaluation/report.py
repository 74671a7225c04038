import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

import pandas as pd

from .config import ARM_TITLES, EPISODE_ORDER_NOTE, ReportColumns, ReportFiles
from .schema import AblationCurve, ArmSummary, ExperimentResult, ResultsMatrix
from .service import arm_means, summarize

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _write_csv(frame: pd.DataFrame, path: Path) -> None:
    frame.to_csv(path, index=False, lineterminator=ReportFiles.LINE_TERMINATOR)


def results_frame(matrices: Sequence[ResultsMatrix]) -> pd.DataFrame:
    """One row per (replicate, task, rep)"""
    rows = [
        (replicate, task_id, rep, m.success[row][rep], m.steps[row][rep])
        for replicate, m in enumerate(matrices)
        for row, task_id in enumerate(m.tasks)
        for rep in range(m.reps)
    ]
    return pd.DataFrame(rows, columns=ReportColumns.RESULTS)


def summary_frame(summaries: Sequence[ArmSummary]) -> pd.DataFrame:
    return pd.DataFrame([s.model_dump() for s in summaries], columns=ReportColumns.SUMMARY)


def _percent(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{100.0 * value:.1f}%"


def _number(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{value:.1f}"


def summary_markdown(means: Mapping[str, Mapping[str, Optional[float]]], replicates: int) -> str:
    """Metric rows by arm columns"""
    arms = list(means)
    header = "| Metric | " + " | ".join(ARM_TITLES.get(arm, arm) for arm in arms) + " |"
    divider = "|---|" + "---|" * len(arms)
    rows = [
        ("Accuracy", "accuracy", _percent),
        ("Best-of-N accuracy", "best_of_n", _percent),
        ("Reliability", "reliability", _percent),
        ("Average steps", "avg_steps", _number),
    ]
    lines = ["# Summary", "", header, divider]
    for title, key, fmt in rows:
        lines.append(f"| {title} | " + " | ".join(fmt(means[arm][key]) for arm in arms) + " |")
    lines += [
        "",
        f"Values are means over {replicates} replicate(s); n/a means no task was solved.",
        "",
        EPISODE_ORDER_NOTE,
        "",
    ]
    return "\n".join(lines)


def ablation_frames(curve: AblationCurve) -> List[pd.DataFrame]:
    points = pd.DataFrame(
        list(zip(curve.k_values, curve.accuracy)), columns=ReportColumns.ABLATION
    )
    detail = pd.DataFrame(
        [
            (k, replicate, value)
            for k, values in zip(curve.k_values, curve.replicate_accuracy)
            for replicate, value in enumerate(values)
        ],
        columns=ReportColumns.ABLATION_REPLICATES,
    )
    return [points, detail]


def write_config(run_dir: PathLike, config: Mapping[str, Any]) -> Path:
    path = Path(run_dir) / ReportFiles.CONFIG
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(config, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def emit_report(
    run_dir: PathLike,
    experiment: Optional[ExperimentResult] = None,
    curve: Optional[AblationCurve] = None,
) -> List[Path]:
    """Write the CSV and markdown reports; returns the written paths"""
    target = Path(run_dir)
    target.mkdir(parents=True, exist_ok=True)
    written: List[Path] = []

    if experiment is not None:
        for arm, matrices in experiment.matrices.items():
            path = target / ReportFiles.RESULTS_TEMPLATE.format(arm=arm)
            _write_csv(results_frame(matrices), path)
            written.append(path)

        summaries = summarize(experiment)
        path = target / ReportFiles.SUMMARY_CSV
        _write_csv(summary_frame(summaries), path)
        written.append(path)

        replicates = max((len(m) for m in experiment.matrices.values()), default=0)
        path = target / ReportFiles.SUMMARY_MD
        path.write_text(summary_markdown(arm_means(summaries), replicates), encoding="utf-8")
        written.append(path)

    if curve is not None:
        points, detail = ablation_frames(curve)
        for frame, name in ((points, ReportFiles.ABLATION), (detail, ReportFiles.ABLATION_REPLICATES)):
            path = target / name
            _write_csv(frame, path)
            written.append(path)

    logger.info("Wrote %d report files to %s", len(written), target)
    return written


def load_results_csv(path: PathLike) -> Dict[int, ResultsMatrix]:
    """Parse a results file back into one matrix per replicate"""
    frame = pd.read_csv(path, dtype={"task_id": str})
    matrices: Dict[int, ResultsMatrix] = {}
    for replicate, group in frame.groupby("replicate", sort=True):
        tasks = list(dict.fromkeys(group["task_id"]))
        reps = int(group["rep"].max()) + 1
        success = [[False] * reps for _ in tasks]
        steps = [[0] * reps for _ in tasks]
        position = {task_id: row for row, task_id in enumerate(tasks)}
        for record in group.itertuples(index=False):
            row = position[record.task_id]
            success[row][int(record.rep)] = bool(record.success)
            steps[row][int(record.rep)] = int(record.steps)
        matrices[int(replicate)] = ResultsMatrix(tasks=tasks, reps=reps, success=success, steps=steps)
    return matrices
