import logging
import sys

LOG_FORMAT = "[LOGS] %(asctime)s %(levelname)s %(name)s - %(message)s"


def setup_logging(level: str = "WARNING") -> None:
    """Install the single stderr handler used by the command line"""
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_praxis", False):
            root.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._praxis = True  # type: ignore[attr-defined]
    root.addHandler(handler)
    root.setLevel(getattr(logging, level.upper(), logging.WARNING))
