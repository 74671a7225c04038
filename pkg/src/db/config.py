"""Memory file format constants"""

# Memory file layout
class StoreFormat:
    VERSION = 1
    VERSION_KEY = "praxis_version"
    ENCODING = "utf-8"
    NEWLINE = b"\n"
    SNAPSHOT_SUFFIX = ".tmp"


# All constants for easy import
__all__ = [
    "StoreFormat",
]
