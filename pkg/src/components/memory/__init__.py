"""Procedural memory store component"""

from .queries import store_statistics
from .schema import (
    IngestReport,
    MemoryEntryFields,
    SkippedEpisode,
    StoreStats,
    TrajectoryRecord,
    TrajectoryStep,
)
from .service import (
    MemoryStore,
    check_chaining,
    entries_from_trajectory,
    ingest_file,
    read_trajectories,
    write_trajectories,
)

__all__ = [
    "IngestReport",
    "MemoryEntryFields",
    "MemoryStore",
    "SkippedEpisode",
    "StoreStats",
    "TrajectoryRecord",
    "TrajectoryStep",
    "check_chaining",
    "entries_from_trajectory",
    "ingest_file",
    "read_trajectories",
    "store_statistics",
    "write_trajectories",
]
