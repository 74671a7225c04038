import argparse
import logging
from pathlib import Path
from typing import Callable, Dict, List, Optional

from rich.console import Console
from rich.table import Table

from src.core.exceptions import PraxisError
from src.core.run_config import RunConfig
from src.utils.seeds import config_hash

from ..memory.schema import TrajectoryRecord
from ..memory.service import MemoryStore, write_trajectories
from ..similarity.service import build_embedder
from ..sim.schema import EpisodeResult
from ..sim.service import save_site
from .config import ARM_TITLES, ReportFiles
from .report import emit_report, write_config
from .schema import AblationCurve
from .service import ablate_k, arm_means, build_site, run_experiment, summarize

logger = logging.getLogger(__name__)
console = Console()


def _format(value: Optional[float], percent: bool) -> str:
    if value is None:
        return "n/a"
    return f"{100.0 * value:.1f}%" if percent else f"{value:.2f}"


def print_summary(means: Dict[str, Dict[str, Optional[float]]]) -> None:
    table = Table(title="Summary (mean over replicates)")
    table.add_column("Arm")
    table.add_column("Accuracy", justify="right")
    table.add_column("Best-of-N", justify="right")
    table.add_column("Reliability", justify="right")
    table.add_column("Avg steps", justify="right")
    for arm, values in means.items():
        table.add_row(
            ARM_TITLES.get(arm, arm),
            _format(values["accuracy"], True),
            _format(values["best_of_n"], True),
            _format(values["reliability"], True),
            _format(values["avg_steps"], False),
        )
    console.print(table)


def print_curve(curve: AblationCurve) -> None:
    table = Table(title="Accuracy by retrieval breadth")
    table.add_column("k", justify="right")
    table.add_column("Accuracy", justify="right")
    for k, value in zip(curve.k_values, curve.accuracy):
        table.add_row(str(k), _format(value, True))
    console.print(table)


def _start_run(config: RunConfig, command: str) -> Path:
    run_dir = config.run_dir(command)
    run_dir.mkdir(parents=True, exist_ok=True)
    partial = run_dir / ReportFiles.PARTIAL
    if partial.exists():
        partial.unlink()
    fingerprint = config.fingerprint(command)
    write_config(
        run_dir,
        {
            "command": command,
            "config_hash": config_hash(fingerprint)[: ReportFiles.HASH_LENGTH],
            "config": config.model_dump(mode="json"),
        },
    )
    console.print(f"run directory: {run_dir}", markup=False, highlight=False)
    return run_dir


def _guarded(run_dir: Path, work: Callable[[], None]) -> int:
    """Run work; a runtime failure leaves a PARTIAL marker next to whatever was written"""
    try:
        work()
    except (PraxisError, OSError) as e:
        logger.error("Run failed: %s", e)
        (run_dir / ReportFiles.PARTIAL).write_text(f"{type(e).__name__}: {e}\n", encoding="utf-8")
        console.print(f"run failed, outputs in {run_dir} are partial: {e}", markup=False)
        return 1
    return 0


def cmd_simulate(args: argparse.Namespace, config: RunConfig) -> int:
    """Run one arm and keep the site, tasks and trajectories it produced"""
    run_dir = _start_run(config, "simulate")

    def work() -> None:
        grid = config.grid_config()
        site, tasks = build_site(grid)
        save_site(site, tasks, run_dir)

        store_factory = None
        if "store" in config.model_fields_set:
            persistent = MemoryStore.open(config.store)
            store_factory = lambda _replicate: persistent  # noqa: E731

        trajectories: List[TrajectoryRecord] = []

        def collect(_replicate: int, episode: EpisodeResult) -> None:
            if episode.trajectory is not None:
                trajectories.append(episode.trajectory)

        result = run_experiment(
            grid,
            [config.arm],
            build_embedder(config.embedder),
            site=(site, tasks),
            store_factory=store_factory,
            on_episode=collect,
        )
        write_trajectories(run_dir / ReportFiles.TRAJECTORIES, trajectories)
        emit_report(run_dir, experiment=result)
        print_summary(arm_means(summarize(result)))

    return _guarded(run_dir, work)


def cmd_eval(args: argparse.Namespace, config: RunConfig) -> int:
    """Run every arm on shared seeds and report the four metrics"""
    run_dir = _start_run(config, "eval")

    def work() -> None:
        result = run_experiment(config.grid_config(), config.arms, build_embedder(config.embedder))
        emit_report(run_dir, experiment=result)
        print_summary(arm_means(summarize(result)))

    return _guarded(run_dir, work)


def cmd_ablate(args: argparse.Namespace, config: RunConfig) -> int:
    """Sweep the retrieval breadth k on the memory arm"""
    run_dir = _start_run(config, "ablate")

    def work() -> None:
        curve = ablate_k(config.grid_config(), config.k_values, build_embedder(config.embedder))
        emit_report(run_dir, curve=curve)
        print_curve(curve)

    return _guarded(run_dir, work)
