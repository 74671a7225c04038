import logging
import os
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, Sequence, Union

from src.core.exceptions import StorageIOError

from .config import StoreFormat

logger = logging.getLogger(__name__)


class RawLine(NamedTuple):
    line_no: int  # 1-based
    data: bytes
    terminated: bool
    end_offset: int  # byte offset just past this line (and its newline)


class JsonlFile:
    """Append-only JSON Lines file"""

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)

    def exists(self) -> bool:
        return self.path.exists()

    def size(self) -> int:
        return self.path.stat().st_size if self.path.exists() else 0

    def read_lines(self) -> Iterator[RawLine]:
        """Yield every line with its terminator state and end offset"""
        data = self.path.read_bytes()
        start = 0
        line_no = 0
        while start < len(data):
            line_no += 1
            end = data.find(StoreFormat.NEWLINE, start)
            if end == -1:
                yield RawLine(line_no, data[start:], False, len(data))
                return
            yield RawLine(line_no, data[start:end], True, end + 1)
            start = end + 1

    def append_lines(self, lines: Sequence[str], terminate_tail: bool = False) -> None:
        """Durably append lines in one write; on failure the file is cut back to its previous size.

        terminate_tail adds the newline missing from the current last line first.
        """
        payload = b"".join(line.encode(StoreFormat.ENCODING) + StoreFormat.NEWLINE for line in lines)
        if terminate_tail:
            payload = StoreFormat.NEWLINE + payload
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            f = open(self.path, "ab")
        except OSError as e:
            raise StorageIOError(f"cannot open {self.path} for append: {e}") from e

        with f:
            offset = f.tell()
            try:
                f.write(payload)
                f.flush()
                os.fsync(f.fileno())
            except OSError as e:
                try:
                    f.truncate(offset)
                except OSError:
                    logger.error("Could not roll back partial append to %s", self.path)
                raise StorageIOError(f"append to {self.path} failed: {e}") from e

    def truncate(self, size: int) -> None:
        try:
            with open(self.path, "r+b") as f:
                f.truncate(size)
                f.flush()
                os.fsync(f.fileno())
        except OSError as e:
            raise StorageIOError(f"cannot truncate {self.path}: {e}") from e

    def write_lines(self, lines: Iterable[str]) -> None:
        """Replace the file atomically with the given lines"""
        tmp = self.path.with_name(self.path.name + StoreFormat.SNAPSHOT_SUFFIX)
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(tmp, "wb") as f:
                for line in lines:
                    f.write(line.encode(StoreFormat.ENCODING) + StoreFormat.NEWLINE)
                f.flush()
                os.fsync(f.fileno())
            os.replace(tmp, self.path)
        except OSError as e:
            raise StorageIOError(f"cannot write snapshot {self.path}: {e}") from e
