import argparse

from rich.console import Console
from rich.table import Table

from src.core.run_config import RunConfig

from .queries import store_statistics
from .service import MemoryStore, ingest_file

console = Console()


def cmd_ingest(args: argparse.Namespace, config: RunConfig) -> int:
    """Ingest a trajectory file into the memory store"""
    store = MemoryStore.open(config.store)
    report = ingest_file(store, args.trajectories)

    if args.json:
        print(report.model_dump_json())
        return 0

    console.print(
        f"{report.entries_added} entries added from {report.episodes_ingested} episodes "
        f"({len(report.skipped)} skipped) into {config.store}"
    )
    for skipped in report.skipped:
        console.print(f"  skipped {skipped.episode_id}: {skipped.reason}", markup=False)
    return 0


def cmd_inspect(args: argparse.Namespace, config: RunConfig) -> int:
    """Print memory store statistics"""
    store = MemoryStore.load(config.store)
    stats = store_statistics(store.entries())

    if args.json:
        print(stats.model_dump_json())
        return 0

    table = Table(title=f"Memory store {config.store}")
    table.add_column("Field")
    table.add_column("Value", justify="right")
    table.add_row("entries", str(stats.entries))
    table.add_row("next id", str(stats.next_id))
    table.add_row("successful-episode entries", str(stats.successes))
    table.add_row("failed-episode entries", str(stats.failures))
    table.add_row("distinct directives", str(stats.distinct_directives))
    for kind, count in stats.action_kinds.items():
        table.add_row(f"action {kind}", str(count))
    console.print(table)
    return 0


__all__ = ["cmd_ingest", "cmd_inspect"]
