"""Result tables, point patterns and run sidecars."""

from .base import COLUMNS, ResultWriter, rows_to_frame, sort_rows
from .patterns import write_patterns
from .registry import get_writer, list_writers, register_writer
from .sidecar import write_sidecar

__all__ = [
    "COLUMNS",
    "ResultWriter",
    "rows_to_frame",
    "sort_rows",
    "write_patterns",
    "get_writer",
    "list_writers",
    "register_writer",
    "write_sidecar",
]
