"""Logging utilities.

Standard `logging` with one plain structured format:
- logs go to `<log_dir>/<run_id>.log` (default `<out_dir>/logs`)
- the same lines go to stderr

Library modules only create `clusternet.<area>` loggers; handlers are installed
here, once per CLI invocation.
"""

from __future__ import annotations
import logging
import os
from typing import Optional

FORMAT = "%(asctime)s %(levelname)s %(name)s | %(message)s"
DATEFMT = "%Y-%m-%dT%H:%M:%S"
# marks handlers owned by setup_logging so repeated runs in one process do not stack them
_OWNED = "_clusternet_handler"


def setup_logging(
    out_dir: str, run_id: str, log_dir: Optional[str] = None, level: int = logging.INFO
) -> str:
    """Install file + console handlers on the root logger and return the log path."""
    if log_dir is None:
        log_dir = os.path.join(out_dir, "logs")
    os.makedirs(log_dir, exist_ok=True)
    log_path = os.path.join(log_dir, f"{run_id}.log")

    root = logging.getLogger()
    root.setLevel(level)
    for handler in list(root.handlers):
        if getattr(handler, _OWNED, False):
            root.removeHandler(handler)
            handler.close()

    fmt = logging.Formatter(fmt=FORMAT, datefmt=DATEFMT)

    fh = logging.FileHandler(log_path, encoding="utf-8")
    fh.setFormatter(fmt)
    setattr(fh, _OWNED, True)
    root.addHandler(fh)

    ch = logging.StreamHandler()
    ch.setFormatter(fmt)
    setattr(ch, _OWNED, True)
    root.addHandler(ch)
    return log_path
