"""Console rendering of validation ledgers and resolved configs."""

from __future__ import annotations
import json
import sys
from typing import Any, Dict, List, Optional

import yaml
from rich import box
from rich.console import Console
from rich.panel import Panel
from rich.syntax import Syntax
from rich.table import Table


def _fmt(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, (list, tuple)):
        return ", ".join(_fmt(v) for v in value)
    return str(value)


def ledger_table(ledger: List[Dict[str, Any]], title: str = "Validation") -> Table:
    table = Table(title=f"[bold]{title}[/bold]", box=box.ROUNDED, border_style="cyan")
    table.add_column("Check", style="cyan", no_wrap=True)
    table.add_column("Result", justify="center")
    table.add_column("Value", justify="right", style="magenta")
    table.add_column("Reference", justify="right", style="yellow")
    table.add_column("Detail", style="dim", max_width=60)
    for e in ledger:
        result = "[green]pass[/green]" if e["passed"] else "[bold red]FAIL[/bold red]"
        table.add_row(e["name"], result, _fmt(e["value"]), _fmt(e["reference"]), e["detail"])
    return table


def print_ledger(ledger: List[Dict[str, Any]], console: Optional[Console] = None) -> None:
    console = console or Console()
    console.print(ledger_table(ledger))
    failed = sum(1 for e in ledger if not e["passed"])
    if failed:
        console.print(f"[bold red]{failed} of {len(ledger)} checks failed[/bold red]")
    else:
        console.print(f"[green]all {len(ledger)} checks passed[/green]")


def load_ledger(sidecar_path: str) -> List[Dict[str, Any]]:
    with open(sidecar_path, "r", encoding="utf-8") as fh:
        return json.load(fh).get("ledger") or []


def print_config(doc: Dict[str, Any], console: Optional[Console] = None) -> None:
    """Resolved config as highlighted YAML (plain YAML when stdout is not a terminal)."""
    text = yaml.safe_dump(doc, sort_keys=False, default_flow_style=False)
    if console is None and not sys.stdout.isatty():
        sys.stdout.write(text)
        return
    console = console or Console()
    panel = Panel(Syntax(text, "yaml"), title="[bold]Resolved config[/bold]", box=box.ROUNDED)
    console.print(panel)
