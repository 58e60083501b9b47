"""
Entry point for the riskbound command.

Exit codes: 0 success, 2 configuration or input error, 3 numerical failure.
"""

import argparse
import logging
import sys
import time

from riskbound.cli.commands import (
    cmd_limit,
    cmd_optimize,
    cmd_re,
    cmd_surrogate_report,
    cmd_sweep,
)
from riskbound.cli.experiment import load_experiment
from riskbound.config import logger
from riskbound.errors import NumericalError, RiskBoundError
from riskbound.riskbounds import log_c_grid

EXIT_CONFIGURATION = 2
EXIT_NUMERICAL = 3


def _add_experiment_args(parser: argparse.ArgumentParser, c_grid: bool = True):
    parser.add_argument('--config', required=True, help='Experiment JSON file')
    parser.add_argument('--out', help='Output path (overrides the config)')
    parser.add_argument('--workers', type=int, help='Process count for node solves (1 = serial)')
    if c_grid:
        parser.add_argument('--c-min', type=float, help='Smallest c of the log grid')
        parser.add_argument('--c-max', type=float, help='Largest c of the log grid')
        parser.add_argument('--c-points', type=int, help='Number of grid points')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='riskbound',
        description='Risk-sensitive performance bounds under aleatoric and epistemic uncertainty'
    )
    parser.add_argument('--verbose', action='store_true', help='DEBUG logging (same as VERBOSE=1)')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('sweep', help='Write Λ and the bounds over the c grid as CSV')
    _add_experiment_args(p)
    p.add_argument('--reference', action='store_true',
                   help='Also write <csv>.relerr.csv against the exact model')
    p.add_argument('--seed', type=int, help='Run a Monte Carlo check with this seed')
    p.add_argument('--mc-samples', type=int, nargs=2, metavar=('OUTER', 'INNER'),
                   help='Monte Carlo sample sizes (default 2000 100)')

    p = sub.add_parser('optimize', help='Optimal c and bound per integral form')
    _add_experiment_args(p)
    p.add_argument('--which', choices=['0', '1', '2', 'all'], default='all')

    p = sub.add_parser('re', help='Relative entropy R(P || Q), closed form and oracle')
    p.add_argument('p', help='Distribution P as JSON or a JSON file')
    p.add_argument('q', help='Distribution Q as JSON or a JSON file')

    p = sub.add_parser('surrogate-report', help='Moment errors of the surrogate per order')
    _add_experiment_args(p, c_grid=False)

    p = sub.add_parser('limit', help='Λ¹ as c -> infinity against Λ¹ at the largest c')
    _add_experiment_args(p)
    return parser


def _c_grid(args, exp):
    """Grid from the experiment, with any --c-* flag overriding its field."""
    if all(getattr(args, name, None) is None for name in ('c_min', 'c_max', 'c_points')):
        return None
    return log_c_grid(
        exp.risk.c_min if args.c_min is None else args.c_min,
        exp.risk.c_max if args.c_max is None else args.c_max,
        exp.risk.points if args.c_points is None else args.c_points,
    )


def dispatch(args) -> int:
    if args.command == 're':
        return cmd_re(args.p, args.q)

    exp = load_experiment(args.config)
    logger.info(f"[CLI] {args.command}: {exp.source} (config {exp.config_hash})")
    out = args.out
    if args.command == 'sweep':
        mc_samples = tuple(args.mc_samples) if args.mc_samples else None
        return cmd_sweep(exp, out, args.workers, _c_grid(args, exp), args.reference, args.seed, mc_samples)
    if args.command == 'optimize':
        return cmd_optimize(exp, args.which, out, args.workers, _c_grid(args, exp))
    if args.command == 'surrogate-report':
        return cmd_surrogate_report(exp, out, args.workers)
    if args.command == 'limit':
        return cmd_limit(exp, out, args.workers, _c_grid(args, exp))
    raise AssertionError(f"unhandled command {args.command}")


def main(argv: list[str] | None = None) -> int:
    """Entry point for the riskbound command."""
    args = build_parser().parse_args(argv)

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    try:
        import setproctitle
        setproctitle.setproctitle(f'riskbound {args.command}')
    except ImportError:
        pass

    started = time.perf_counter()
    try:
        code = dispatch(args)
    except NumericalError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (RiskBoundError, ValueError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_CONFIGURATION
    logger.info(f"[CLI] {args.command} finished in {time.perf_counter() - started:.2f}s")
    return code


if __name__ == '__main__':
    sys.exit(main())
