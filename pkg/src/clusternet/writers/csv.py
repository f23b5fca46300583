from __future__ import annotations
import os
from typing import Sequence

from ..experiments.base import ResultRow
from .base import COLUMNS, ResultWriter, rows_to_frame

# 17 significant digits round-trip every float64
FLOAT_FORMAT = "%.17g"


class CsvResultWriter(ResultWriter):
    name = "csv"
    filename = "results.csv"

    def write(self, rows: Sequence[ResultRow], *, out_dir: str) -> str:
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, self.filename)
        frame = rows_to_frame(rows)
        frame.to_csv(
            path,
            columns=list(COLUMNS),
            index=False,
            float_format=FLOAT_FORMAT,
            na_rep="nan",
            lineterminator="\n",
        )
        return path
