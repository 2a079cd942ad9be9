"""Entry point of the cyclebound command."""

import argparse
import hashlib
import json
import logging
import sys
import time
from typing import Callable, Dict, List, Optional

import pandas as pd

from cyclebound import __version__
from cyclebound.case_engine.search import prove_average_bound
from cyclebound.case_engine.search_config import SearchConfig
from cyclebound.cli.arguments import build_parser
from cyclebound.cli.formatting import CommandResult, render
from cyclebound.collatz.range_verifier import verify_range
from cyclebound.collatz.trajectory_profile import profile
from cyclebound.errors import CheckpointError, InsufficientPrecisionError
from cyclebound.numerics.precision import default_precision_bits
from cyclebound.numerics.rational import format_scientific, rational_to_string
from cyclebound.pipeline.bound_iteration import (
    SW_DIRECT_LIMIT,
    BoundIteration,
    Verdict,
    sw_log_upper_bound,
    sw_upper_bound,
)
from cyclebound.pipeline.global_config import GlobalConfig, TConstantMode
from cyclebound.pipeline.table import generate_table
from cyclebound.pipeline.threshold import ThresholdMode, x0_threshold

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNPROVEN = 2


def _hash(fields: Dict[str, str]) -> str:
    payload = json.dumps(fields, sort_keys=True).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()


def _header(command: str, config_hash: str, precision: str, mode: str) -> Dict[str, str]:
    return {
        "command": command,
        "config_hash": config_hash,
        "precision_bits": precision,
        "mode": mode,
        "version": __version__,
    }


def _precision(args: argparse.Namespace) -> int:
    return args.precision if args.precision is not None else default_precision_bits()


def _global_config(args: argparse.Namespace, **kwargs) -> GlobalConfig:
    return GlobalConfig(
        x0=args.x0,
        t_constant_mode=TConstantMode(args.mode),
        precision_bits=_precision(args),
        max_rounds=args.max_rounds,
        **kwargs
    )


def run_bounds(args: argparse.Namespace) -> CommandResult:
    config = _global_config(args, scan_all_m2=args.scan_all_m2)
    iteration = BoundIteration(args.m, args.k0, config)
    iteration.run()
    bits = config.precision_bits
    summary = {
        "m": str(args.m),
        "K_start": str(args.k0),
        "final_bound": str(iteration.final_bound),
        "verdict": iteration.verdict.value,
        "rounds": str(len(iteration.reports)),
        "sw_log_upper": format_scientific(sw_log_upper_bound(args.m, bits).hi, 8, "up"),
    }
    if args.m <= SW_DIRECT_LIMIT:
        summary["sw_upper"] = format_scientific(sw_upper_bound(args.m, bits).hi, 6, "up")

    exit_code = EXIT_OK
    if args.expect_contradiction and iteration.verdict is not Verdict.CONTRADICTION:
        logger.error("m=%d ended in %s, not CONTRADICTION", args.m, iteration.verdict.value)
        exit_code = EXIT_UNPROVEN
    return CommandResult(
        header=_header("bounds", config.config_hash(), str(bits), config.t_constant_mode.value),
        summary=summary,
        rows=iteration.to_dataframe(),
        exit_code=exit_code
    )


def run_table(args: argparse.Namespace) -> CommandResult:
    config = _global_config(args, trust_computer_bound=args.trust_computer_bound)
    table = generate_table(args.m, config, K_start=args.k0, workers=args.workers)
    every_m = table.rows[-1]
    return CommandResult(
        header=_header("table", config.config_hash(), str(config.precision_bits), config.t_constant_mode.value),
        summary={"rows": str(len(table.rows)), "all_m_bound": str(every_m.K_bound)},
        rows=table.to_dataframe()
    )


def run_search(args: argparse.Namespace) -> CommandResult:
    config = SearchConfig.create(
        args.mode,
        args.target,
        args.depth,
        x0=args.x0,
        k_cap=args.k_cap,
        ell_cap=args.ell_cap,
        modulus_exp_ceiling=args.modulus_ceiling,
        node_budget=args.node_budget,
        frontier_size=args.frontier_size
    )
    outcome = prove_average_bound(
        config,
        workers=args.workers,
        checkpoint_path=args.checkpoint,
        resume=args.resume
    )
    shown = outcome.witnesses[:args.max_witnesses]
    rows = pd.DataFrame(
        [
            {
                "modulus_exp": str(state.modulus_exp),
                "residue": str(state.residue),
                "case": state.describe(),
            }
            for state in shown
        ],
        columns=["modulus_exp", "residue", "case"]
    )
    summary = {
        "verdict": "PROVEN" if outcome.proven else "UNPROVEN",
        "target_coef": rational_to_string(config.target_coef),
        "max_depth": str(config.max_depth),
        "x0": str(config.x0_mode),
        "nodes_explored": str(outcome.nodes_explored),
        "nodes_closed": str(outcome.nodes_closed),
        "max_modulus_exp_reached": str(outcome.max_modulus_exp_reached),
        "witnesses": str(len(outcome.witnesses)),
        "budget_exhausted": str(outcome.budget_exhausted).lower(),
    }
    return CommandResult(
        header=_header("search", outcome.config_hash, "exact", config.mode.value),
        summary=summary,
        rows=rows,
        exit_code=EXIT_OK if outcome.proven else EXIT_UNPROVEN,
        elapsed_seconds=outcome.elapsed_seconds
    )


def run_threshold(args: argparse.Namespace) -> CommandResult:
    bits = _precision(args)
    result = x0_threshold(args.k_target, ThresholdMode(args.mode), precision_bits=bits)
    config_hash = _hash({"k_target": str(args.k_target), "mode": args.mode, "precision_bits": str(bits)})
    return CommandResult(
        header=_header("threshold", config_hash, str(bits), args.mode),
        summary=result.to_dict()
    )


def run_verify_range(args: argparse.Namespace) -> CommandResult:
    report = verify_range(
        args.limit,
        worker_count=args.workers,
        block_size=args.block_size,
        checkpoint_path=args.checkpoint
    )
    config_hash = _hash({"limit": str(args.limit), "block_size": str(args.block_size)})
    summary = {
        "limit": str(report.limit),
        "verified": str(report.verified).lower(),
        "max_excursion": str(report.max_excursion),
        "blocks_completed": str(report.blocks_completed),
        "first_failure": "" if report.first_failure is None else str(report.first_failure),
    }
    return CommandResult(
        header=_header("verify-range", config_hash, "exact", "range"),
        summary=summary,
        exit_code=EXIT_OK if report.verified else EXIT_UNPROVEN,
        elapsed_seconds=report.elapsed_seconds
    )


def run_profile(args: argparse.Namespace) -> CommandResult:
    trajectory = profile(args.start, args.count)
    config_hash = _hash({"start": str(args.start), "count": str(args.count)})
    summary = {
        "start": str(trajectory.start),
        "minima": str(len(trajectory)),
        "truncated": str(trajectory.truncated).lower(),
        "trivial_start": str(trajectory.trivial_start).lower(),
    }
    return CommandResult(
        header=_header("profile", config_hash, "exact", "profile"),
        summary=summary,
        rows=trajectory.to_dataframe()
    )


COMMANDS: Dict[str, Callable[[argparse.Namespace], CommandResult]] = {
    "bounds": run_bounds,
    "table": run_table,
    "search": run_search,
    "threshold": run_threshold,
    "verify-range": run_verify_range,
    "profile": run_profile,
}


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and return its exit status.

    0 means success, 1 a usage or precision error, 2 a claim that was not
    established (an unproven search, a failed range check or a missing
    expected contradiction).
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)

    began = time.perf_counter()
    try:
        result = COMMANDS[args.command](args)
    except InsufficientPrecisionError as exc:
        logger.error("%s", exc)
        return EXIT_ERROR
    except (CheckpointError, ValueError) as exc:
        logger.error("%s", exc)
        print(f"cyclebound {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if not result.elapsed_seconds:
        result.elapsed_seconds = time.perf_counter() - began
    sys.stdout.write(render(result, args.format))
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
