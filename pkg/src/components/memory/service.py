"""Durable append-only procedural memory.

The memory file is JSON Lines: a header line followed by one entry per line.
Appends are made durable before they return; a crash can leave at most one damaged
final line, which the next load skips and the next append cuts off.
"""

import json
import logging
import threading
import time
from pathlib import Path
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from pydantic import ValidationError

from src.core.exceptions import (
    ContractViolation,
    StoreFormatError,
    TrajectoryChainError,
    TrajectoryFormatError,
    UnsupportedVersionError,
)
from src.db import JsonlFile, MemoryEntryRecord, StoreFormat, StoreHeader

from ..state.schema import EnvState, InternalState, MemoryEntry
from ..state.service import env_state_from_observation
from .schema import IngestReport, MemoryEntryFields, SkippedEpisode, TrajectoryRecord

logger = logging.getLogger(__name__)

Clock = Callable[[], int]


def utc_seconds() -> int:
    return int(time.time())


def _first_error(error: ValidationError) -> str:
    detail = error.errors()[0]
    loc = ".".join(str(part) for part in detail.get("loc", ())) or "record"
    return f"{loc}: {detail.get('msg', 'invalid value')}"


def _header_line() -> str:
    return StoreHeader().model_dump_json()


def _entry_line(entry: MemoryEntry) -> str:
    return MemoryEntryRecord.from_entry(entry).model_dump_json()


def _check_header(data: bytes, line_no: int) -> None:
    try:
        payload = json.loads(data)
    except ValueError as e:
        raise StoreFormatError(f"invalid header: {e}", line_no) from e
    if not isinstance(payload, dict) or StoreFormat.VERSION_KEY not in payload:
        raise StoreFormatError(f"missing {StoreFormat.VERSION_KEY} header", line_no)
    version = payload[StoreFormat.VERSION_KEY]
    if version != StoreFormat.VERSION:
        raise UnsupportedVersionError(
            f"memory file version {version!r} is not supported (expected {StoreFormat.VERSION})"
        )
    try:
        StoreHeader.model_validate(payload)
    except ValidationError as e:
        raise StoreFormatError(_first_error(e), line_no) from e


def _parse_entry(data: bytes, line_no: int) -> MemoryEntry:
    try:
        return MemoryEntryRecord.model_validate_json(data).to_entry()
    except ValidationError as e:
        raise StoreFormatError(_first_error(e), line_no) from e


class MemoryStore:
    """Append-ordered memory entries, optionally backed by a JSON Lines file.

    One writer at a time; readers take `entries()` snapshots which are immutable.
    """

    def __init__(self, path: Optional[Union[str, Path]] = None, clock: Optional[Clock] = None):
        self._file = JsonlFile(path) if path is not None else None
        if self._file is not None and self._file.size() > 0:
            raise ContractViolation(f"{path} already has content; use MemoryStore.load")
        self._entries: Tuple[MemoryEntry, ...] = ()
        self._clock: Clock = clock or utc_seconds
        self._lock = threading.Lock()
        self._has_header = False
        self._clean_size = 0
        self._unterminated_tail = False

    # Loading

    @classmethod
    def load(cls, path: Union[str, Path], clock: Optional[Clock] = None) -> "MemoryStore":
        """Replay a memory file; an empty file gives an empty store"""
        store = cls(clock=clock)
        store._file = JsonlFile(path)
        if not store._file.exists():
            raise FileNotFoundError(f"memory file not found: {path}")

        entries: List[MemoryEntry] = []
        lines = list(store._file.read_lines())
        for raw in lines:
            is_last = raw.line_no == len(lines)
            try:
                if raw.line_no == 1:
                    _check_header(raw.data, raw.line_no)
                    store._has_header = True
                else:
                    entry = _parse_entry(raw.data, raw.line_no)
                    if entry.id != len(entries):
                        raise StoreFormatError(
                            f"expected id {len(entries)}, found {entry.id}", raw.line_no
                        )
                    entries.append(entry)
            except StoreFormatError:
                if is_last and not raw.terminated:
                    logger.warning(
                        "Ignoring damaged final line %d of %s", raw.line_no, store._file.path
                    )
                    break
                raise
            store._clean_size = raw.end_offset
            store._unterminated_tail = not raw.terminated

        store._entries = tuple(entries)
        logger.info("Loaded %d memory entries from %s", len(entries), store._file.path)
        return store

    @classmethod
    def open(cls, path: Union[str, Path], clock: Optional[Clock] = None) -> "MemoryStore":
        """Load the file when it exists, otherwise start a new store at that path"""
        if Path(path).exists() and Path(path).stat().st_size > 0:
            return cls.load(path, clock=clock)
        return cls(path, clock=clock)

    # Reading

    @property
    def path(self) -> Optional[Path]:
        return self._file.path if self._file is not None else None

    @property
    def next_id(self) -> int:
        return len(self._entries)

    def entries(self) -> Tuple[MemoryEntry, ...]:
        return self._entries

    def get(self, entry_id: int) -> MemoryEntry:
        if not 0 <= entry_id < len(self._entries):
            raise KeyError(entry_id)
        return self._entries[entry_id]

    def __iter__(self) -> Iterator[MemoryEntry]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MemoryStore):
            return NotImplemented
        return self._entries == other._entries

    __hash__ = None  # type: ignore[assignment]

    # Writing

    def append(self, fields: MemoryEntryFields) -> int:
        return self.append_many([fields])[0]

    def append_many(self, batch: Sequence[MemoryEntryFields]) -> List[int]:
        """Append entries as one durable write; either all of them land or none"""
        if not batch:
            return []
        with self._lock:
            now = self._clock()
            start = len(self._entries)
            new_entries = [
                MemoryEntry(
                    id=start + offset,
                    env_pre=fields.env_pre,
                    internal=fields.internal,
                    action=fields.action,
                    env_post=fields.env_post,
                    episode_success=fields.episode_success,
                    created_at=now,
                )
                for offset, fields in enumerate(batch)
            ]
            if self._file is not None:
                self._persist(new_entries)
            self._entries = self._entries + tuple(new_entries)
            return [entry.id for entry in new_entries]

    def _persist(self, new_entries: Sequence[MemoryEntry]) -> None:
        assert self._file is not None
        if self._file.size() > self._clean_size:
            logger.warning("Truncating damaged tail of %s", self._file.path)
            self._file.truncate(self._clean_size)

        lines = [_entry_line(entry) for entry in new_entries]
        if not self._has_header:
            lines.insert(0, _header_line())
        self._file.append_lines(lines, terminate_tail=self._unterminated_tail)
        self._has_header = True
        self._unterminated_tail = False
        self._clean_size = self._file.size()

    def ingest_trajectory(self, record: TrajectoryRecord) -> List[int]:
        """One entry per step, all written together"""
        batch = entries_from_trajectory(record)
        ids = self.append_many(batch)
        logger.debug("Ingested episode %s as entries %s", record.episode_id, ids)
        return ids

    def save_snapshot(self, path: Union[str, Path]) -> None:
        """Write the whole store to path atomically"""
        target = JsonlFile(path)
        with self._lock:
            lines = [_header_line(), *(_entry_line(entry) for entry in self._entries)]
            target.write_lines(lines)
            if self._file is not None and self._file.path.resolve() == target.path.resolve():
                self._has_header = True
                self._unterminated_tail = False
                self._clean_size = target.size()


def check_chaining(record: TrajectoryRecord) -> List[Tuple[EnvState, EnvState]]:
    """Canonical (pre, post) states per step; each post must equal the next pre"""
    states = [
        (env_state_from_observation(step.observation), env_state_from_observation(step.post_observation))
        for step in record.steps
    ]
    for index in range(1, len(states)):
        if states[index][0] != states[index - 1][1]:
            raise TrajectoryChainError(index, record.episode_id)
    return states


def entries_from_trajectory(record: TrajectoryRecord) -> List[MemoryEntryFields]:
    states = check_chaining(record)
    return [
        MemoryEntryFields(
            env_pre=pre,
            internal=InternalState(directive=record.directive, progress_note=step.progress_note),
            action=step.action.to_action(),
            env_post=post,
            episode_success=record.success,
        )
        for step, (pre, post) in zip(record.steps, states)
    ]


def read_trajectories(path: Union[str, Path]) -> List[TrajectoryRecord]:
    """Parse a whole trajectory file; blank lines are skipped"""
    source = Path(path)
    if not source.exists():
        raise FileNotFoundError(f"trajectory file not found: {path}")

    records = []
    with open(source, "r", encoding=StoreFormat.ENCODING) as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                records.append(TrajectoryRecord.model_validate_json(line))
            except ValidationError as e:
                raise TrajectoryFormatError(_first_error(e), line_no) from e
    return records


def write_trajectories(path: Union[str, Path], records: Iterable[TrajectoryRecord]) -> None:
    JsonlFile(path).write_lines(record.model_dump_json() for record in records)


def ingest_file(store: MemoryStore, path: Union[str, Path]) -> IngestReport:
    """Ingest every valid trajectory of a file.

    The file is parsed completely before anything is written, so a malformed line
    leaves the store untouched. Episodes that parse but cannot be turned into entries
    (broken chaining, blank directive or target) are skipped with a reason.
    """
    records = read_trajectories(path)
    report = IngestReport()
    for record in records:
        try:
            ids = store.ingest_trajectory(record)
        except (TrajectoryChainError, ValueError) as e:
            reason = _first_error(e) if isinstance(e, ValidationError) else str(e)
            logger.info("Skipping episode %s: %s", record.episode_id, reason)
            report.skipped.append(SkippedEpisode(episode_id=record.episode_id, reason=reason))
            continue
        report.entry_ids.extend(ids)
        report.entries_added += len(ids)
        report.episodes_ingested += 1

    logger.info(
        "Ingested %d entries from %d episodes (%d skipped)",
        report.entries_added,
        report.episodes_ingested,
        len(report.skipped),
    )
    return report
