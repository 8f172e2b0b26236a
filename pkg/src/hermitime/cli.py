"""Command-line entry point: ``hermitime run`` and ``hermitime list``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import EXPERIMENTS, parse_config
from .errors import ConfigError
from .experiments import run_experiment
from .report import emit_report

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hermitime", description="Numerical checks of a Hermitian time operator.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log timings to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run one experiment and emit its report")
    run.add_argument("--experiment", "-e", help="experiment name (see 'list')")
    run.add_argument("--config", "-c", type=Path, help="key=value config file")
    run.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                     help="override a config value; repeatable")
    run.add_argument("--format", "-f", choices=("csv", "json"), help="output format (default csv)")
    run.add_argument("--out", "-o", type=Path, help="output path (default stdout)")

    sub.add_parser("list", help="list experiments")
    return parser


def _overrides(args) -> dict:
    out = {}
    for item in args.overrides:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        out[key.strip()] = value.strip()
    if args.experiment:
        out["experiment"] = args.experiment
    if args.format:
        out["format"] = args.format
    return out


def cmd_list(out=None) -> int:
    out = out or sys.stdout
    width = max(map(len, EXPERIMENTS))
    for info in EXPERIMENTS.values():
        out.write(f"{info.name:<{width}}  [{info.equations}]  {info.summary}\n")
    return EXIT_OK


def cmd_run(args) -> int:
    try:
        source = args.config.read_text(encoding="utf-8") if args.config else ""
        config = parse_config(source, _overrides(args))
    except ConfigError as exc:
        print(f"hermitime: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"hermitime: cannot read config {args.config}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_USAGE

    report = run_experiment(config)
    try:
        emit_report(report, config.format, args.out)
    except OSError as exc:
        print(f"hermitime: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if report.error is not None:
        print(f"hermitime: {report.error}", file=sys.stderr)
        return EXIT_NUMERIC
    for c in report.criteria:
        if not c.passed:
            print(f"hermitime: FAIL {c.quantity}: residual {c.residual:.3g} > tolerance {c.tolerance:.3g}",
                  file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAILED


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "list":
        return cmd_list()
    return cmd_run(args)


if __name__ == "__main__":
    sys.exit(main())
