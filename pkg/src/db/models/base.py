# Import all wire models
from .action import ActionPayload
from .header import StoreHeader
from .memory_entry import MemoryEntryRecord

# Export all models
__all__ = [
    "ActionPayload",
    "StoreHeader",
    "MemoryEntryRecord",
]
