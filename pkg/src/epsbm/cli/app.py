"""Command line entry point for epsbm."""

import argparse
import logging
import sys
import time
from typing import Optional

from epsbm import __version__
from epsbm.config.settings import verifier_config
from epsbm.core.errors import EpsBMError, SpaceValidationError
from epsbm.formats.reports import RunReport, emit_report
from epsbm.utils.file_utils import atomic_write_text
from epsbm.utils.log_utils import configure_logging

from .commands import COMMANDS, EXIT_INVALID

logger = logging.getLogger(__name__)


def _shared(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--space", help="Space file in mms-1 format")
    parser.add_argument("--eps", type=float, default=0.0, help="Slack eps (default: 0)")
    parser.add_argument(
        "--cover-multiple",
        type=float,
        help="Use this multiple of the effective_eps stored in the space file as eps",
    )
    parser.add_argument(
        "--n", type=float, default=2.0, help="Dimension n > 1 (default: 2)"
    )
    parser.add_argument(
        "--t", type=float, action="append", help="Interpolation parameter (repeatable)"
    )
    parser.add_argument("--t-grid", type=int, help="Use t = k/(m+1), k = 1..m")
    parser.add_argument("--r", type=float, action="append", help="Radius (repeatable)")
    parser.add_argument("--r-grid", help="Radii lo:hi:steps")
    parser.add_argument(
        "--strategy", choices=["exact", "greedy", "auto"], default="auto"
    )
    parser.add_argument(
        "--method", choices=["exhaustive", "sampled", "auto"], default="auto"
    )
    parser.add_argument("--a0", default="", help="Comma-separated indices of A0")
    parser.add_argument("--a1", default="", help="Comma-separated indices of A1")
    parser.add_argument("--pairs", type=int, default=1000, help="Sampled pair count")
    parser.add_argument(
        "--sampler", choices=["singletons", "balls", "random"], default="balls"
    )
    parser.add_argument(
        "--samples", type=int, default=1_000_000, help="Monte Carlo samples"
    )
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--tol", type=float, help="Reporting slack below zero")
    parser.add_argument("--m", type=int, default=2, help="Sphere dimension")
    parser.add_argument(
        "--centers", type=int, default=300, help="Discretization centers"
    )
    parser.add_argument("--cloud-size", type=int, help="Dense cloud size")
    parser.add_argument(
        "--workers",
        type=int,
        default=verifier_config.workers,
        help="Worker threads; 0 means one per CPU",
    )
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    parser.add_argument("--out", help="Output file (space file for discretize-sphere)")
    parser.add_argument("--report", help="Report file for discretize-sphere")
    parser.add_argument("--log-level", help="Logging level (default: WARNING)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epsbm",
        description="Approximated Brunn-Minkowski inequalities and concentration "
        "of measure on finite metric measure spaces.",
    )
    parser.add_argument("--version", action="version", version=f"epsbm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        _shared(sub.add_parser(name))
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    """
    Run one subcommand and write its report.

    Returns:
        0 on success, 1 when a violation was found, 2 on invalid input
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)

    started = time.perf_counter()
    try:
        parameters, payload, code = COMMANDS[args.command](args)
        report = RunReport(
            command=args.command,
            parameters=parameters,
            payload=payload,
            wall_time_s=time.perf_counter() - started,
        )
        text = emit_report(report, args.format)
    except SpaceValidationError as e:
        for violation in e.violations:
            print(
                f"{violation.kind} {violation.indices}: {violation.message}",
                file=sys.stderr,
            )
        return EXIT_INVALID
    except EpsBMError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID

    target = args.report if args.command == "discretize-sphere" else args.out
    if target:
        try:
            atomic_write_text(target, text)
        except OSError as e:
            print(f"error: cannot write report: {e}", file=sys.stderr)
            return EXIT_INVALID
        logger.info("report written to %s", target)
    else:
        sys.stdout.write(text)
    return code
