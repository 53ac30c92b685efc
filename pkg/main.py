#!/usr/bin/env python3
"""
Gaussian Riesz transform toolkit
Command-line entry point

  python main.py transform --family old --alpha 1 --input h1
  python main.py verify geometry --samples 100000
  python main.py calibrate --family new --alpha 2,0 --n 2
"""

import argparse
import logging
import sys

from cli import COMMANDS, EXIT_USAGE, build_config
from models import ConfigError, UnknownExperimentError
from models.sweep_result import DEFAULT_SEED

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class UsageParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors surface as ConfigError (exit 64)"""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _common_arguments() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--n', type=int, help="dimension, 1..3 (default 1)")
    common.add_argument('--degree', type=int, help="truncation degree")
    common.add_argument('--nodes', type=int, help="Gauss-Hermite nodes per axis (default 40)")
    common.add_argument('--alpha', help="comma-separated multi-index, e.g. 2,0")
    common.add_argument('--family', choices=["old", "new"], help="Riesz family (default old)")
    common.add_argument('--k', type=int, help="order |alpha| when --alpha is not given")
    common.add_argument('--seed', type=int, help=f"random seed (default {DEFAULT_SEED})")
    common.add_argument('--out', help="output directory (default reports)")
    common.add_argument('--config', help="key=value configuration file")
    common.add_argument('--workers', type=int, help="worker threads (default 1)")
    common.add_argument('--calibration', help="calibration table file")
    common.add_argument('--eps-inner', dest="eps_inner", type=float, help="inner p.v. exclusion radius")
    common.add_argument('-v', '--verbose', action="count", default=0, help="-v INFO, -vv DEBUG")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_arguments()
    parser = UsageParser(description="Gaussian Riesz transforms: spectral and kernel routes, estimate checks")
    sub = parser.add_subparsers(dest="command", required=True)

    transform = sub.add_parser("transform", parents=[common], help="evaluate R_alpha f or R*_alpha f")
    transform.add_argument('--input', help="built-in input: h<index> (e.g. h1, h2:0) or bump")
    transform.add_argument('--coeffs', help="Hermite coefficients, e.g. '1:0=0.5;0:2=-1'")
    transform.add_argument('--points', help="evaluation points, e.g. '0.5,1;-1,0'")
    transform.add_argument('--with-kernel', dest="with_kernel", action="store_true", default=None,
                           help="add the p.v. kernel column")

    verify = sub.add_parser("verify", parents=[common], help="run estimate checks")
    verify.add_argument('experiment', help="experiment selector or 'all'")
    verify.add_argument('--samples', type=int, help="sample budget")
    verify.add_argument('--case', choices=["both", "i", "ii"], help="geometry lemma case")
    verify.add_argument('--route', choices=["auto", "local", "spectral", "kernel"], help="atom transform route")
    verify.add_argument('--delta', type=float, help="phi_delta exponent (default 0.5)")

    sub.add_parser("calibrate", parents=[common], help="fit the kernel normalization")
    return parser


def configure_logging(verbosity: int):
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT)


def main(argv=None) -> int:
    """Main application entry point"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        configure_logging(args.verbose)
        overrides = {key: value for key, value in vars(args).items()
                     if key not in ("command", "config", "verbose")}
        config = build_config(args.config, overrides)
        return COMMANDS[args.command](config)
    except (ConfigError, UnknownExperimentError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
