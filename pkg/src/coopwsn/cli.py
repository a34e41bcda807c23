"""
Command-line interface.

::

    coopwsn run --config PATH [--seed N] [--out PATH] [--workers N]
    coopwsn figure {fig5,...,fig9} [--trials N] [--seed N] [--points ...] [--out-dir DIR]
    coopwsn energy-table --config PATH [--out PATH]
    coopwsn codecs selftest

Exit status: 0 success, 1 configuration or usage error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from . import __version__
from .codecs.vectors import selftest
from .config import ConfigError, load_config
from .csvio import emit_table, rows_table, sweep_column
from .figures import FIGURES, run_figure
from .montecarlo import ENERGY_TABLE_COLUMNS, energy_table, run_sweep

__all__ = ["main", "build_parser", "EXIT_OK", "EXIT_CONFIG", "EXIT_RUNTIME"]

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="coopwsn", description="Error-control and cooperative-relay simulator for sensor links.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run the sweep described by a config file")
    run.add_argument("--config", required=True)
    run.add_argument("--seed", type=int, help="override [sweep] seed")
    run.add_argument("--out", help="output file, '-' for stdout (overrides [output] path)")
    run.add_argument("--workers", type=int, help="worker processes (overrides [output] workers)")

    fig = sub.add_parser("figure", help="reproduce one figure as CSV plot data")
    fig.add_argument("name", help=f"one of {', '.join(FIGURES)}")
    fig.add_argument("--trials", type=int, help="sessions per point (default 100000)")
    fig.add_argument("--seed", type=int, default=0)
    fig.add_argument("--points", type=float, nargs="+", help="sweep values replacing the default sweep")
    fig.add_argument("--curves", nargs="+", help="only these curves")
    fig.add_argument("--out-dir", default=".", help="directory for the <figure>_<curve>.csv files")
    fig.add_argument("--workers", type=int, default=1)
    fig.add_argument("--analytic", action="store_true", help="also write closed-form companions")
    fig.add_argument("--format", choices=("csv", "tsv"), default="csv")

    en = sub.add_parser("energy-table", help="closed-form energy and efficiency of DT, SRC and MRC")
    en.add_argument("--config", required=True)
    en.add_argument("--out", help="output file, '-' for stdout")

    cod = sub.add_parser("codecs", help="codec utilities")
    cod.add_argument("action", choices=("selftest",))
    cod.add_argument("--seed", type=int, default=0)
    return p


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _cmd_run(args):
    cfg = load_config(args.config)
    scenario = cfg.scenario
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ConfigError("must be an unsigned 64-bit integer", key="--seed")
        scenario = replace(scenario, master_seed=args.seed)
    if args.workers is not None and args.workers < 1:
        raise ConfigError("must be >= 1", key="--workers")
    workers = args.workers or cfg.workers
    rows = []
    if cfg.emit_simulated:
        rows += run_sweep(scenario, "simulated", workers)
    if cfg.emit_analytic:
        rows += run_sweep(scenario, "analytic")
    _write(args.out if args.out is not None else cfg.output,
           rows_table(scenario.sweep_variable, rows, cfg.delimiter))
    return EXIT_OK


def _cmd_figure(args):
    if args.name not in FIGURES:
        raise ConfigError(f"unknown figure {args.name!r}; expected one of {', '.join(FIGURES)}")
    if args.trials is not None and args.trials < 1:
        raise ConfigError("must be >= 1", key="--trials")
    if args.workers < 1:
        raise ConfigError("must be >= 1", key="--workers")
    try:
        result = run_figure(
            args.name,
            trials=args.trials,
            seed=args.seed,
            sweep_points=args.points,
            workers=args.workers,
            emit_analytic=args.analytic,
            curves=args.curves,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    os.makedirs(args.out_dir, exist_ok=True)
    var = "snr_db" if args.name in ("fig5", "fig8", "fig9") else "ber"
    delim = "\t" if args.format == "tsv" else ","
    for curve, rows in result.items():
        path = os.path.join(args.out_dir, f"{args.name}_{curve}.{args.format}")
        _write(path, rows_table(var, rows, delim))
        print(path)
    return EXIT_OK


def _cmd_energy(args):
    cfg = load_config(args.config)
    sc = cfg.scenario
    text = emit_table([sweep_column(sc.sweep_variable), *ENERGY_TABLE_COLUMNS], energy_table(sc), cfg.delimiter)
    _write(args.out if args.out is not None else cfg.output, text)
    return EXIT_OK


def _cmd_codecs(args):
    checks = selftest(seed=args.seed)
    for name, ok in checks:
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    return EXIT_OK if all(ok for _, ok in checks) else EXIT_RUNTIME


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        handler = {"run": _cmd_run, "figure": _cmd_figure, "energy-table": _cmd_energy, "codecs": _cmd_codecs}
        return handler[args.command](args)
    except ConfigError as exc:
        print(f"coopwsn: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except KeyboardInterrupt:
        return EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001 - reported, mapped to the runtime exit code
        print(f"coopwsn: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
