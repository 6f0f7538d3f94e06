"""Command-line entrypoint for braid dilatation bounds (``bdl``)."""

import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from apps.cli import output
from core.config import settings
from core.errors import CHECK_FAILURE_EXIT_CODE, BraidDilatationError, DomainError
from domain.enums import CheckSuiteName, GrowthSource, OutputFormat, RepresentationKind
from domain.models import AnalyzeOptions
from services.bounds_service import analyze
from services.braid_core import parse_braid, power
from services.check_suites import check_suite
from services.free_group_fox import zeta1_trace_data
from services.representations import represent
from services.spectral_growth import MIN_GROWTH_LENGTH, growth_estimate, trace_power_growth

logger = logging.getLogger(__name__)


def configure_logging(verbose: bool = False) -> None:
    """Send logs to stderr; stdout carries only reports."""
    level = logging.DEBUG if verbose or settings.DEBUG else settings.LOG_LEVEL.upper()
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bdl",
        description="Dilatation lower bounds for braids from Burau, LKB and group-ring traces.",
    )
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level on stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    def braid_arguments(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--n", type=int, required=True, help="Strand count")
        sub.add_argument("--word", default="", help='Comma-separated letters, e.g. "1,-2"')

    rep = commands.add_parser("rep", help="Print a representation matrix")
    rep.add_argument("--kind", choices=[k.value for k in RepresentationKind], default="burau")
    braid_arguments(rep)
    rep.add_argument("--k", type=int, default=1, help="Represent the k-th power of the braid")
    rep.add_argument("--out", choices=[f.value for f in OutputFormat], default="json")

    bound = commands.add_parser("bound", help="Compute dilatation lower bounds")
    braid_arguments(bound)
    bound.add_argument("--grid", type=int, default=settings.TORUS_GRID)
    bound.add_argument("--refine", type=int, default=settings.TORUS_REFINE)
    bound.add_argument("--kmax", type=int, default=settings.KMAX)
    bound.add_argument("--zeta1", action="store_true", help="Add group-ring trace growth")
    bound.add_argument("--lkb", action="store_true", help="Add the LKB torus supremum")
    bound.add_argument("--timings", action="store_true", help="Report wall-clock stage timings")

    growth = commands.add_parser("growth", help="Trace growth sequences")
    braid_arguments(growth)
    growth.add_argument("--kmax", type=int, default=settings.KMAX)
    growth.add_argument("--kind", choices=[g.value for g in GrowthSource], default="zeta1")
    growth.add_argument("--out", choices=[f.value for f in OutputFormat], default="json")

    check = commands.add_parser("check", help="Run an invariant suite")
    check.add_argument("--suite", choices=[s.value for s in CheckSuiteName], default="all")
    return parser


# ============================================================================
# Commands
# ============================================================================

def run_rep(args: argparse.Namespace) -> int:
    braid = parse_braid(args.word, args.n)
    bundle = represent(RepresentationKind(args.kind), power(braid, args.k))
    if args.out == OutputFormat.CSV.value:
        sys.stdout.write(output.rep_csv(bundle))
    else:
        sys.stdout.write(output.dumps(output.rep_json(bundle, args.k)))
    return 0


def run_bound(args: argparse.Namespace) -> int:
    braid = parse_braid(args.word, args.n)
    opts = AnalyzeOptions(
        grid=args.grid,
        refine=args.refine,
        kmax=args.kmax,
        with_zeta1=args.zeta1,
        with_lkb=args.lkb,
        timings=args.timings,
    )
    report = analyze(braid, opts)
    sys.stdout.write(output.dumps(output.report_json(report)))
    return 0


def run_growth(args: argparse.Namespace) -> int:
    if args.kmax < MIN_GROWTH_LENGTH:
        raise DomainError(f"kmax must be at least {MIN_GROWTH_LENGTH} (got {args.kmax})")
    braid = parse_braid(args.word, args.n)
    csv_out = args.out == OutputFormat.CSV.value
    if args.kind == GrowthSource.ZETA1.value:
        rows = zeta1_trace_data(braid, args.kmax)
        if csv_out:
            sys.stdout.write(output.zeta1_growth_csv(rows))
        else:
            estimate = growth_estimate([row.trace_of_norms for row in rows])
            sys.stdout.write(output.dumps(output.zeta1_growth_json(braid.text(), braid.n, rows, estimate)))
        return 0

    matrix = represent(RepresentationKind(args.kind), braid).matrix
    growth = trace_power_growth(matrix, args.kmax)
    if csv_out:
        sys.stdout.write(output.trace_growth_csv(growth))
    else:
        sys.stdout.write(output.dumps(output.trace_growth_json(args.kind, braid.text(), braid.n, growth)))
    return 0


def run_check(args: argparse.Namespace) -> int:
    summary = check_suite(CheckSuiteName(args.suite))
    sys.stdout.write(output.dumps(output.suite_json(summary)))
    return 0 if summary.passed else CHECK_FAILURE_EXIT_CODE


COMMANDS = {
    "rep": run_rep,
    "bound": run_bound,
    "growth": run_growth,
    "check": run_check,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments and dispatch.

    Returns:
        Process exit code (0 ok, 2 parse/range, 3 not applicable,
        4 resource guard, 5 check failure)
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        return COMMANDS[args.command](args)
    except BraidDilatationError as e:
        logger.debug("Command %s failed", args.command, exc_info=True)
        sys.stderr.write(f"error: {e}\n")
        return e.exit_code
    except ValidationError as e:
        sys.stderr.write(f"error: invalid options: {e.errors()[0]['msg']}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
