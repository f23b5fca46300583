from __future__ import annotations
import os
from typing import List, Sequence

from ..geometry.models import PointPattern
from .csv import FLOAT_FORMAT


def write_patterns(patterns: Sequence[PointPattern], *, out_dir: str) -> List[str]:
    """One `x,y` CSV per realization under `<out_dir>/patterns/`."""
    base = os.path.join(out_dir, "patterns")
    os.makedirs(base, exist_ok=True)
    paths = []
    for k, pattern in enumerate(patterns):
        path = os.path.join(base, f"pattern_{k:04d}.csv")
        pattern.to_frame().to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        paths.append(path)
    return paths
