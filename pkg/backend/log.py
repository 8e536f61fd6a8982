import logging
import sys

_FORMAT = "[%(levelname)s] %(message)s"
_configured = False


def setup_logging(verbose: bool = False) -> None:
    """Attach one stderr handler to the root logger (idempotent)."""
    global _configured
    level = logging.DEBUG if verbose else logging.INFO
    root = logging.getLogger()
    root.setLevel(level)
    if _configured:
        return
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(_FORMAT))
    root.addHandler(handler)
    _configured = True
