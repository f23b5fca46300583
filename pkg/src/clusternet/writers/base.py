"""Result writers.

A writer turns the sorted `ResultRow`s of one run into a table on disk. The
CSV writer is the reference format; others add columns but never drop any.
"""

from __future__ import annotations
from abc import ABC, abstractmethod
from typing import Sequence

import pandas as pd

from ..experiments.base import ResultRow

COLUMNS = ("param", "metric", "method", "value", "uncertainty")


def sort_rows(rows: Sequence[ResultRow]) -> list:
    return sorted(rows, key=lambda r: r.sort_key)


def rows_to_frame(rows: Sequence[ResultRow], *, with_position: bool = False) -> pd.DataFrame:
    """Rows in (series, index, metric, method) order as a DataFrame."""
    ordered = sort_rows(rows)
    data = {
        "param": [r.param for r in ordered],
        "metric": [r.metric for r in ordered],
        "method": [r.method for r in ordered],
        "value": [r.value for r in ordered],
        "uncertainty": [r.uncertainty for r in ordered],
    }
    if with_position:
        data["series"] = [r.series for r in ordered]
        data["index"] = [r.index for r in ordered]
    return pd.DataFrame(data)


class ResultWriter(ABC):
    name: str
    filename: str

    @abstractmethod
    def write(self, rows: Sequence[ResultRow], *, out_dir: str) -> str:
        """Write the table and return its path."""
        raise NotImplementedError
