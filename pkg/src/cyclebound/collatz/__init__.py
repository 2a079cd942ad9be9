from cyclebound.collatz.dynamics import (
    collatz_step,
    two_adic_valuation,
    accel_odd_run,
    odd_run_values,
    odd_run_residue,
    t_value,
    merger_witness,
)
from cyclebound.collatz.trajectory_profile import MinimumRecord, TrajectoryProfile, profile
from cyclebound.collatz.range_verifier import (
    DEFAULT_BLOCK_SIZE,
    BlockResult,
    RangeVerifierReport,
    verify_block,
    verify_range,
    read_checkpoint,
)

__all__ = [
    "collatz_step",
    "two_adic_valuation",
    "accel_odd_run",
    "odd_run_values",
    "odd_run_residue",
    "t_value",
    "merger_witness",
    "MinimumRecord",
    "TrajectoryProfile",
    "profile",
    "DEFAULT_BLOCK_SIZE",
    "BlockResult",
    "RangeVerifierReport",
    "verify_block",
    "verify_range",
    "read_checkpoint",
]
