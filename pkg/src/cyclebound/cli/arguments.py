"""Argument grammar of the cyclebound command."""

import argparse
import os
import re
import sys
from typing import Optional

from cyclebound.case_engine.search_config import (
    DEFAULT_ELL_CAP,
    DEFAULT_FRONTIER_SIZE,
    DEFAULT_K_CAP,
    DEFAULT_MODULUS_EXP_CEILING,
    DEFAULT_NODE_BUDGET,
)
from cyclebound.collatz.range_verifier import DEFAULT_BLOCK_SIZE
from cyclebound.numerics.rational import Rational, to_rational
from cyclebound.pipeline.bound_iteration import DEFAULT_K_START
from cyclebound.pipeline.global_config import DEFAULT_MAX_ROUNDS, VERIFIED_X0
from cyclebound.pipeline.table import DEFAULT_TABLE_M_VALUES

OUTPUT_FORMATS = ("text", "json", "csv")
_POWER_PRODUCT = re.compile(r"^\s*(\d+)\s*\*\s*(\d+)\s*(?:\^|\*\*)\s*(\d+)\s*$")
_POWER = re.compile(r"^\s*(\d+)\s*(?:\^|\*\*)\s*(\d+)\s*$")


class CycleboundArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def parse_big_int(text: str) -> int:
    """Parse ``704*2^60``, ``2^69``, ``7e11``, ``1.375e11`` or plain digits.

    Scientific forms must denote an integer.

    Raises
    ------
    argparse.ArgumentTypeError
        If the text is none of these or is not integer valued.
    """
    compact = text.replace("_", "")
    match = _POWER_PRODUCT.match(compact)
    if match:
        factor, base, exponent = (int(group) for group in match.groups())
        return factor * base ** exponent
    match = _POWER.match(compact)
    if match:
        base, exponent = (int(group) for group in match.groups())
        return base ** exponent
    try:
        value = to_rational(compact.strip())
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if value.denominator != 1:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value.numerator)


def parse_positive_int(text: str) -> int:
    value = parse_big_int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def parse_rational_arg(text: str) -> Rational:
    """Parse ``3/4``, ``97/54`` or a decimal."""
    try:
        return to_rational(text.strip())
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def parse_x0(text: str) -> Optional[int]:
    """``symbolic`` or a big integer; None means symbolic."""
    if text.strip().lower() == "symbolic":
        return None
    return parse_positive_int(text)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=OUTPUT_FORMATS, default="text",
        help="Report format on standard output. Default: text."
    )
    common.add_argument(
        "--precision", type=parse_positive_int, default=None,
        help="Initial working precision in bits. Default: $CYCLEBOUND_PRECISION_BITS or 384."
    )
    common.add_argument(
        "-v", "--verbose", action="count", default=0,
        help="Log progress to standard error; repeat for debug output."
    )
    return common


def _add_bounds(subparsers, common) -> None:
    bounds = subparsers.add_parser(
        "bounds", parents=[common],
        help="Iterate the lower bound on K for one m."
    )
    bounds.add_argument("--m", type=parse_positive_int, required=True, help="Number of local minima.")
    bounds.add_argument(
        "--k0", type=parse_positive_int, default=DEFAULT_K_START,
        help="Starting lower bound on K. Default: 7e11."
    )
    bounds.add_argument(
        "--x0", type=parse_positive_int, default=VERIFIED_X0,
        help="Every n <= X0 is known to reach 1. Default: 704*2^60."
    )
    bounds.add_argument(
        "--mode", choices=("analytic", "computer1", "weighted"), default="analytic",
        help="Average T bound used when no window of large minima exists."
    )
    bounds.add_argument("--max-rounds", type=parse_positive_int, default=DEFAULT_MAX_ROUNDS)
    bounds.add_argument(
        "--scan-all-m2", action="store_true",
        help="Try every admissible window length, not only the longest."
    )
    bounds.add_argument(
        "--expect-contradiction", action="store_true",
        help="Exit with status 2 unless the iteration ends in CONTRADICTION."
    )


def _add_table(subparsers, common) -> None:
    table = subparsers.add_parser(
        "table", parents=[common],
        help="Lower bounds on K for a list of maximal m values."
    )
    table.add_argument(
        "--m", type=parse_positive_int, nargs="+", default=list(DEFAULT_TABLE_M_VALUES),
        help="Largest m of each row."
    )
    table.add_argument("--k0", type=parse_positive_int, default=None, help="Starting bound for every row.")
    table.add_argument("--x0", type=parse_positive_int, default=VERIFIED_X0)
    table.add_argument("--mode", choices=("analytic", "computer1", "weighted"), default="analytic")
    table.add_argument("--max-rounds", type=parse_positive_int, default=DEFAULT_MAX_ROUNDS)
    table.add_argument(
        "--trust-computer-bound", action="store_true",
        help="Allow computer1 rows, which rest on an external computer search."
    )
    table.add_argument("--workers", type=parse_positive_int, default=os.cpu_count() or 1)


def _add_search(subparsers, common) -> None:
    search = subparsers.add_parser(
        "search", parents=[common],
        help="Prove an average bound on T by residue-class case analysis."
    )
    search.add_argument("--mode", choices=("unweighted", "weighted"), default="unweighted")
    search.add_argument("--target", type=parse_rational_arg, required=True, help="Target coefficient, e.g. 97/54.")
    search.add_argument("--depth", type=parse_positive_int, required=True, help="Most minima in one window.")
    search.add_argument(
        "--x0", type=parse_x0, default=None,
        help="'symbolic' (default) or a concrete X0 such as 704*2^60."
    )
    search.add_argument("--k-cap", type=parse_positive_int, default=DEFAULT_K_CAP)
    search.add_argument("--ell-cap", type=parse_positive_int, default=DEFAULT_ELL_CAP)
    search.add_argument("--modulus-ceiling", type=parse_positive_int, default=DEFAULT_MODULUS_EXP_CEILING)
    search.add_argument("--node-budget", type=parse_positive_int, default=DEFAULT_NODE_BUDGET)
    search.add_argument("--frontier-size", type=parse_positive_int, default=DEFAULT_FRONTIER_SIZE)
    search.add_argument("--workers", type=parse_positive_int, default=os.cpu_count() or 1)
    search.add_argument("--checkpoint", default=None, help="Frontier checkpoint file.")
    search.add_argument("--resume", action="store_true", help="Continue from --checkpoint.")
    search.add_argument(
        "--max-witnesses", type=parse_positive_int, default=20,
        help="Witnesses listed in the report. Default: 20."
    )


def _add_threshold(subparsers, common) -> None:
    threshold = subparsers.add_parser(
        "threshold", parents=[common],
        help="X0 needed for every cycle to have K >= a target."
    )
    threshold.add_argument("--k-target", type=parse_positive_int, required=True)
    threshold.add_argument(
        "--mode", choices=("weighted", "theorem20", "legacy"), default="weighted",
        help="weighted and theorem20 invert 1/(4 log 2 X0); legacy inverts 1/(3 log 2 X0)."
    )


def _add_verify_range(subparsers, common) -> None:
    verify = subparsers.add_parser(
        "verify-range", parents=[common],
        help="Check that every n <= limit reaches 1."
    )
    verify.add_argument("--limit", type=parse_positive_int, required=True)
    verify.add_argument("--workers", type=parse_positive_int, default=os.cpu_count() or 1)
    verify.add_argument("--block-size", type=parse_positive_int, default=DEFAULT_BLOCK_SIZE)
    verify.add_argument(
        "--checkpoint", default=None,
        help="Completed-block log; blocks already listed are skipped."
    )


def _add_profile(subparsers, common) -> None:
    profile = subparsers.add_parser(
        "profile", parents=[common],
        help="List the successive local minima of a trajectory."
    )
    profile.add_argument("--start", type=parse_positive_int, required=True, help="Odd start value.")
    profile.add_argument("--count", type=parse_positive_int, default=10, help="Minima to record.")


def build_parser() -> argparse.ArgumentParser:
    """The top-level parser with one subcommand per tool."""
    parser = CycleboundArgumentParser(
        prog="cyclebound",
        description="Lower bounds on the size of nontrivial Collatz cycles."
    )
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=CycleboundArgumentParser)
    common = _common_options()
    for add in (_add_bounds, _add_table, _add_search, _add_threshold, _add_verify_range, _add_profile):
        add(subparsers, common)
    return parser
