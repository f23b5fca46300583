from __future__ import annotations
import os
from typing import Sequence

import pyarrow as pa
import pyarrow.parquet as pq

from ..experiments.base import ResultRow
from .base import ResultWriter, rows_to_frame


def results_schema() -> pa.Schema:
    return pa.schema(
        [
            ("param", pa.float64()),
            ("metric", pa.string()),
            ("method", pa.string()),
            ("value", pa.float64()),
            ("uncertainty", pa.float64()),
            ("series", pa.int64()),
            ("index", pa.int64()),
        ]
    )


class ParquetResultWriter(ResultWriter):
    name = "parquet"
    filename = "results.parquet"

    def write(self, rows: Sequence[ResultRow], *, out_dir: str) -> str:
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, self.filename)
        frame = rows_to_frame(rows, with_position=True)
        table = pa.Table.from_pandas(frame, schema=results_schema(), preserve_index=False)
        pq.write_table(table, path)
        return path
