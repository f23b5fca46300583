"""Run ID resolution: explicit or auto-generated from config.

Auto-generation uses:
- prefix_digits / suffix_digits: first/last N digits of a compact timestamp
- include_kind: experiment kind as the leading name part
"""

from __future__ import annotations
import re
from datetime import datetime, timezone
from typing import Any, Dict, List, Tuple


def _timestamp_digits(prefix: int = 8, suffix: int = 6) -> Tuple[str, str]:
    """Compact timestamp YYYYMMDDHHMMSS; return (first prefix digits, last suffix digits)."""
    ts = datetime.now(timezone.utc).strftime("%Y%m%d%H%M%S")
    a = ts[: min(prefix, len(ts))]
    b = ts[-min(suffix, len(ts)) :] if suffix else ""
    return (a, b)


def _kind_name(cfg: Dict[str, Any]) -> str:
    kind = str((cfg.get("experiment") or {}).get("kind") or "run")
    # safe for file names: alphanumeric, dash and underscore
    return re.sub(r"[^\w\-]", "_", kind) or "run"


def generate_run_id(cfg: Dict[str, Any], auto_cfg: Dict[str, Any]) -> str:
    """Build run_id from run.run_id_auto.

    auto_cfg may contain:
    - prefix_digits: first N digits of the timestamp (default 8, the date)
    - suffix_digits: last N digits of the timestamp (default 6, the time)
    - include_kind: lead with the experiment kind (default True)
    - separator: string between parts (default "_")
    """
    prefix_digits = int(auto_cfg.get("prefix_digits", 8))
    suffix_digits = int(auto_cfg.get("suffix_digits", 6))
    separator = str(auto_cfg.get("separator", "_"))

    parts: List[str] = []
    if auto_cfg.get("include_kind", True):
        parts.append(_kind_name(cfg))
    pre, suf = _timestamp_digits(prefix_digits, suffix_digits)
    if pre:
        parts.append(pre)
    if suf:
        parts.append(suf)
    return separator.join(parts) if parts else "run"


def resolve_run_id(cfg: Dict[str, Any]) -> str:
    """Explicit run.run_id, else auto-generated from run.run_id_auto, else the experiment kind."""
    run = cfg.get("run") or {}
    explicit = run.get("run_id")
    if explicit is not None and str(explicit).strip():
        return str(explicit).strip()
    auto_cfg = run.get("run_id_auto")
    if isinstance(auto_cfg, dict) and auto_cfg.get("enabled", True):
        return generate_run_id(cfg, auto_cfg)
    return _kind_name(cfg)


def resolve_out_dir(cfg: Dict[str, Any], run_id: str) -> str:
    """run.out_dir with the {run_id} placeholder replaced."""
    run = cfg.get("run") or {}
    out_dir = str(run.get("out_dir") or "runs/{run_id}")
    return out_dir.replace("{run_id}", run_id)
