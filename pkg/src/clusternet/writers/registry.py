"""Writer registry.

Add new result formats without touching the runner by registering them here.
"""

from __future__ import annotations
from typing import Dict, List

from .base import ResultWriter
from .csv import CsvResultWriter
from .parquet import ParquetResultWriter

_WRITERS: Dict[str, ResultWriter] = {
    "csv": CsvResultWriter(),
    "parquet": ParquetResultWriter(),
}


def register_writer(name: str, writer: ResultWriter) -> None:
    if name in _WRITERS:
        raise ValueError(f"Result writer '{name}' already registered")
    _WRITERS[name] = writer


def list_writers() -> List[str]:
    return list(_WRITERS.keys())


def get_writer(name: str) -> ResultWriter:
    if name not in _WRITERS:
        raise KeyError(
            f"Unknown result writer: {name}. "
            f"Available: {list(_WRITERS)}. "
            f"Register with register_writer()"
        )
    return _WRITERS[name]
