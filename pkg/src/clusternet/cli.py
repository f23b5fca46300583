"""CLI entrypoint.

Commands:
- `clusternet <experiment> --config FILE [--seed N] [--out DIR] [--workers K]`
  with <experiment> one of ccdf, success-curve, gain-curve, capacity-sweep,
  spread-spectrum, validate
- `clusternet config-check --config FILE` prints the resolved config without running
- `clusternet ledger SIDECAR` prints the validation ledger stored in a run sidecar

A previous run's `<run_id>.json` sidecar is accepted wherever a config is.

Exit codes: 0 ok, 1 validation failure, 2 config error, 3 numerical non-convergence.
"""

from __future__ import annotations
import argparse
import logging
import sys
from typing import List, Optional

from .config.loader import build_experiment_config, resolve_document
from .errors import ConfigError, QuadratureError
from .experiments.registry import list_experiments
from .experiments.runner import run_experiment
from .logging_ import setup_logging
from .tools.ledger import load_ledger, print_config, print_ledger

log = logging.getLogger("clusternet.cli")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _add_run_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", required=True, help="Experiment YAML (or a run sidecar .json)")
    p.add_argument("--seed", type=int, default=None, help="Master seed (overrides run.seed)")
    p.add_argument("--out", default=None, help="Output directory (overrides run.out_dir)")
    p.add_argument("--workers", type=int, default=None, help="Monte Carlo threads")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="clusternet")
    sub = p.add_subparsers(dest="cmd", required=True)
    for kind in list_experiments():
        _add_run_args(sub.add_parser(kind, help=f"run the {kind} experiment"))

    pc = sub.add_parser("config-check", help="print the resolved config without running")
    _add_run_args(pc)
    pc.add_argument("--kind", default=None, help="Experiment kind (default: experiment.kind)")

    pl = sub.add_parser("ledger", help="print the validation ledger of a run")
    pl.add_argument("sidecar")
    return p


def _config_check(args) -> int:
    doc, lines = resolve_document(
        args.config, kind=args.kind, seed=args.seed, out_dir=args.out, workers=args.workers
    )
    build_experiment_config(doc, lines)
    print_config(doc)
    return EXIT_OK


def _run(args) -> int:
    doc, lines = resolve_document(
        args.config, kind=args.cmd, seed=args.seed, out_dir=args.out, workers=args.workers
    )
    cfg = build_experiment_config(doc, lines)
    log_path = setup_logging(out_dir=cfg.out_dir, run_id=cfg.run_id, log_dir=cfg.log_dir)
    log.info(f"config={args.config} log={log_path}")
    report = run_experiment(cfg)
    if report.ledger is not None:
        print_ledger(report.ledger)
    return report.exit_status


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "ledger":
            print_ledger(load_ledger(args.sidecar))
            return EXIT_OK
        if args.cmd == "config-check":
            return _config_check(args)
        return _run(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except QuadratureError as e:
        log.error(str(e))
        print(f"numerical error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
