#!/usr/bin/env python3
import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from unipotent.api.commands import COMMANDS
from unipotent.config import settings
from unipotent.errors import UsageError
from unipotent.models import RunConfig
from unipotent.utils import parse_int_list

logger = logging.getLogger("unipotent")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _output_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--format", dest="output_format", default=settings.DEFAULT_FORMAT,
                        help="json or csv")
    parser.add_argument("--output", help="write here instead of standard output")


def _type_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--family", required=True, help="root system label such as G2, or a family letter with --rank")
    parser.add_argument("--rank", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unipotent", description="Exact checks of unipotent order formulas")
    parser.add_argument("--log-level", default=settings.LOG_LEVEL)
    sub = parser.add_subparsers(dest="command", required=True)

    grid = sub.add_parser("ordergrid", help="n(P), m and p^m per distinguished parabolic and prime")
    _type_flags(grid)
    grid.add_argument("--primes", required=True)
    _output_flags(grid)

    dist = sub.add_parser("distinguished", help="distinguished parabolics with their gradings")
    _type_flags(dist)
    _output_flags(dist)

    tab = sub.add_parser("tables", help="exceptional Coxeter data and exponential-type thresholds")
    _output_flags(tab)

    roots = sub.add_parser("rootsys", help="positive roots, coroots and heights")
    _type_flags(roots)
    _output_flags(roots)

    witt = sub.add_parser("witt", help="Witt vector arithmetic over F_p")
    witt.add_argument("action", choices=("add", "order", "sumpolys"))
    witt.add_argument("--p", type=int, required=True)
    witt.add_argument("--n", type=int)
    witt.add_argument("--a", help="coordinates, comma-separated")
    witt.add_argument("--b", help="coordinates, comma-separated")
    _output_flags(witt)

    ah = sub.add_parser("ah", help="Artin-Hasse coefficients and their valuations")
    ah.add_argument("--p", type=int, required=True)
    ah.add_argument("--terms", type=int, required=True)
    _output_flags(ah)

    cv = sub.add_parser("commvar", help="commuting p-nilpotent tuples")
    cv.add_argument("action", choices=("census",))
    cv.add_argument("--p", type=int, required=True)
    cv.add_argument("--d", type=int, required=True)
    cv.add_argument("--ambient", required=True, help="strict-upper:n, gl:n or blocks:b1,b2,...")
    _output_flags(cv)

    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("--suite", required=True)
    verify.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    verify.add_argument("--trials", type=int, default=settings.DEFAULT_TRIALS)
    verify.add_argument("--primes")
    verify.add_argument("--classical-primes", default="5,7,11")
    verify.add_argument("--max-rank", type=int, default=8)
    verify.add_argument("--workers", type=int, default=settings.WORKERS)
    _output_flags(verify)
    return parser


def to_run_config(args: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(args).items() if k != "log_level" and v is not None}
    for key in ("primes", "classical_primes", "a", "b"):
        if key in fields:
            fields[key] = parse_int_list(fields[key])
    return RunConfig(**fields)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        logging.basicConfig(level=args.log_level.upper(), stream=sys.stderr,
                            format="%(asctime)s %(levelname)s %(name)s: %(message)s")
        config = to_run_config(args)
        return COMMANDS[config.command](config)
    except (UsageError, ValidationError, ValueError) as e:
        logger.error(f"Usage error: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
