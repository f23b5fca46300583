"""Console helpers: validation ledgers and config echo."""

from .ledger import ledger_table, load_ledger, print_config, print_ledger

__all__ = ["ledger_table", "load_ledger", "print_config", "print_ledger"]
