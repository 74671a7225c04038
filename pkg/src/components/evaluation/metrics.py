"""Experiment metrics.

All sums go through math.fsum, so every value is independent of task and
repetition order. Undefined metrics return None rather than 0.
"""

import math
from typing import List, Optional

from src.core.exceptions import ContractViolation

from .schema import ResultsMatrix


def _require_cells(m: ResultsMatrix) -> None:
    if m.is_empty:
        raise ContractViolation("metrics need at least one task")


def _qualifying_rows(m: ResultsMatrix) -> List[int]:
    return [row for row, outcomes in enumerate(m.success) if any(outcomes)]


def accuracy(m: ResultsMatrix) -> float:
    """Mean success over all task x rep cells"""
    _require_cells(m)
    successes = math.fsum(1.0 for row in m.success for cell in row if cell)
    return successes / (len(m.tasks) * m.reps)


def best_of_n(m: ResultsMatrix) -> float:
    """Fraction of tasks solved at least once"""
    _require_cells(m)
    return len(_qualifying_rows(m)) / len(m.tasks)


def reliability(m: ResultsMatrix) -> Optional[float]:
    """Mean per-task success rate over tasks with at least one success"""
    _require_cells(m)
    rows = _qualifying_rows(m)
    if not rows:
        return None
    rates = [sum(m.success[row]) / m.reps for row in rows]
    return math.fsum(rates) / len(rates)


def avg_steps(
    m: ResultsMatrix,
    pooled: bool = False,
    successful_runs_only: bool = False,
) -> Optional[float]:
    """Average steps on tasks with at least one success.

    By default each qualifying task contributes the mean over all its reps and the
    task means are averaged. `pooled` averages all counted cells at once instead;
    `successful_runs_only` counts only the successful reps.
    """
    _require_cells(m)
    rows = _qualifying_rows(m)
    if not rows:
        return None

    per_task = []
    for row in rows:
        counted = [
            steps
            for steps, succeeded in zip(m.steps[row], m.success[row])
            if succeeded or not successful_runs_only
        ]
        per_task.append(counted)

    if pooled:
        cells = [steps for counted in per_task for steps in counted]
        return math.fsum(cells) / len(cells)
    means = [math.fsum(counted) / len(counted) for counted in per_task]
    return math.fsum(means) / len(means)
