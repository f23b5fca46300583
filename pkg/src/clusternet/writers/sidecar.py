"""JSON sidecar: everything needed to re-run a result table."""

from __future__ import annotations
import json
import math
import os
from typing import Any, Dict


def _jsonable(obj: Any) -> Any:
    """Replace non-finite floats by strings so the file stays strict JSON."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item") and callable(obj.item):
        return _jsonable(obj.item())
    return obj


def write_sidecar(path: str, payload: Dict[str, Any]) -> str:
    """Write the sidecar JSON (overwrites existing)."""
    dirpath = os.path.dirname(path)
    if dirpath:
        os.makedirs(dirpath, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_jsonable(payload), fh, indent=2, ensure_ascii=False, allow_nan=False)
    return path
