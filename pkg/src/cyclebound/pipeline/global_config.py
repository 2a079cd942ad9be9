"""Configuration shared by the bound pipeline."""

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict

from cyclebound.case_engine.search_config import SYMBOLIC_X0_FLOOR
from cyclebound.numerics.precision import (
    DEFAULT_PRECISION_CEILING,
    default_precision_bits,
    validate_precision,
)

# Every n <= VERIFIED_X0 is known to reach the trivial cycle.
VERIFIED_X0 = 704 << 60
ANALYTIC_X0_FLOOR = SYMBOLIC_X0_FLOOR
DEFAULT_MAX_ROUNDS = 50


class TConstantMode(Enum):
    """Which average bound on T over the minima of a cycle is assumed.

    ANALYTIC_97_54 averages 97/54 per minimum and holds for every X0 >= 766.
    COMPUTER_1 averages 1 per minimum; it rests on a computer search that
    needs X0 >= VERIFIED_X0. WEIGHTED_3_4 averages 3/4 per odd step and makes
    the bound independent of the number of minima.
    """
    ANALYTIC_97_54 = "analytic"
    COMPUTER_1 = "computer1"
    WEIGHTED_3_4 = "weighted"


@dataclass(frozen=True)
class GlobalConfig:
    """Parameters of a bound computation.

    Parameters
    ----------
    x0 : int
        Every n <= x0 is known to reach 1.
    t_constant_mode : TConstantMode
        The average T bound used when no window of large minima exists.
    precision_bits : int
        First working precision; raised automatically on undecided comparisons.
    precision_ceiling : int
        Highest precision the automatic retry may reach.
    max_rounds : int
        Cap on the rounds of one bound iteration.
    scan_all_m2 : bool
        Try every admissible window length and keep the best epsilon
        instead of taking the longest window.
    trust_computer_bound : bool
        Accept COMPUTER_1 rows in tables without a fresh certificate.

    Raises
    ------
    ValueError
        If x0 is below 766, COMPUTER_1 is used with x0 below VERIFIED_X0, or a
        precision or round count is out of range.
    """
    x0: int = VERIFIED_X0
    t_constant_mode: TConstantMode = TConstantMode.ANALYTIC_97_54
    precision_bits: int = field(default_factory=default_precision_bits)
    precision_ceiling: int = DEFAULT_PRECISION_CEILING
    max_rounds: int = DEFAULT_MAX_ROUNDS
    scan_all_m2: bool = False
    trust_computer_bound: bool = False

    def __post_init__(self):
        if not isinstance(self.t_constant_mode, TConstantMode):
            object.__setattr__(self, "t_constant_mode", TConstantMode(self.t_constant_mode))
        object.__setattr__(self, "x0", int(self.x0))
        if self.x0 < ANALYTIC_X0_FLOOR:
            raise ValueError(f"x0 must be at least {ANALYTIC_X0_FLOOR}, got {self.x0}")
        if self.t_constant_mode is TConstantMode.COMPUTER_1 and self.x0 < VERIFIED_X0:
            raise ValueError(
                f"the computer1 mode requires x0 >= 704*2^60, got {self.x0}"
            )
        validate_precision(self.precision_bits)
        if self.precision_ceiling < self.precision_bits:
            raise ValueError(
                f"precision_ceiling {self.precision_ceiling} is below "
                f"precision_bits {self.precision_bits}"
            )
        if self.max_rounds < 1:
            raise ValueError(f"max_rounds must be positive, got {self.max_rounds}")

    def to_dict(self) -> Dict[str, str]:
        return {
            "x0": str(self.x0),
            "t_constant_mode": self.t_constant_mode.value,
            "precision_bits": str(self.precision_bits),
            "precision_ceiling": str(self.precision_ceiling),
            "max_rounds": str(self.max_rounds),
            "scan_all_m2": str(self.scan_all_m2).lower(),
            "trust_computer_bound": str(self.trust_computer_bound).lower(),
        }

    def config_hash(self) -> str:
        """sha256 of the canonical JSON of the fields."""
        payload = json.dumps(self.to_dict(), sort_keys=True).encode("utf-8")
        return hashlib.sha256(payload).hexdigest()
