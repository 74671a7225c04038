from .database import JsonlFile, RawLine
from .models.base import *
from .config import StoreFormat

__all__ = [
    "JsonlFile",
    "RawLine",
    "ActionPayload",
    "StoreHeader",
    "MemoryEntryRecord",
    "StoreFormat",
]
