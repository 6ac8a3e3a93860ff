# jlrectifier/logging_setup.py
import logging

from rich.logging import RichHandler

from . import config

_configured = False


def configure_logging(level: str = config.LOG_LEVEL) -> None:
    """Install a RichHandler on the root logger. Safe to call more than once."""
    global _configured
    root = logging.getLogger()
    root.setLevel(level.upper())
    if _configured:
        return
    handler = RichHandler(show_path=False, rich_tracebacks=True, markup=False)
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    root.addHandler(handler)
    _configured = True
