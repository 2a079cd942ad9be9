"""How large X0 must be for every cycle to have K >= K_target."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from gmpy2 import mpq

from cyclebound.contfrac.smallest_denominator import nearest_fraction_above
from cyclebound.errors import InsufficientPrecisionError
from cyclebound.numerics.constants import delta_interval, log2_interval
from cyclebound.numerics.precision import (
    DEFAULT_PRECISION_CEILING,
    default_precision_bits,
    run_with_precision_retry,
)
from cyclebound.numerics.rational import ceil_rational, format_scientific, rational_to_string
from cyclebound.numerics.real_interval import RealInterval

logger = logging.getLogger(__name__)


class ThresholdMode(Enum):
    """The X0-dependent epsilon bound 1 / (c log 2 X0) and its coefficient c."""
    WEIGHTED = "weighted"
    # Alternate spelling of WEIGHTED.
    THEOREM20 = "theorem20"
    LEGACY = "legacy"

    @property
    def coefficient(self) -> int:
        return 3 if self is ThresholdMode.LEGACY else 4


@dataclass(frozen=True)
class ThresholdResult:
    """Answer of :func:`x0_threshold`.

    Attributes
    ----------
    K_target : int
        The bound to reach.
    mode : ThresholdMode
        Which epsilon bound was inverted.
    fraction : mpq
        The least fraction above delta with denominator below K_target.
    epsilon_star : RealInterval
        fraction - delta: the widest epsilon that still forces K >= K_target.
    x0_required : int
        Smallest X0 the rounded-up computation certifies.
    precision_bits : int
        Precision at which the result was decided.
    """
    K_target: int  # pylint: disable=invalid-name
    mode: ThresholdMode
    fraction: mpq
    epsilon_star: RealInterval
    x0_required: int
    precision_bits: int

    @property
    def x0_in_units_of_2_60(self) -> mpq:
        return mpq(self.x0_required, 1 << 60)

    def to_dict(self) -> dict:
        lo, hi = self.epsilon_star.to_strings(8)
        return {
            "K_target": str(self.K_target),
            "mode": self.mode.value,
            "fraction": rational_to_string(self.fraction),
            "epsilon_star_lower": lo,
            "epsilon_star_upper": hi,
            "x0_required": str(self.x0_required),
            "x0_required_over_2_60": format_scientific(self.x0_in_units_of_2_60, 8, "up"),
            "precision_bits": str(self.precision_bits),
        }


def _threshold(K_target: int, mode: ThresholdMode, bits: int) -> ThresholdResult:  # pylint: disable=invalid-name
    delta = delta_interval(bits)
    fraction = nearest_fraction_above(delta, K_target - 1)
    epsilon_star = RealInterval.exact(fraction, bits) - delta
    if epsilon_star.lo <= 0:
        raise InsufficientPrecisionError(f"insufficient precision: {fraction} not certified above delta")
    smallest = mode.coefficient * log2_interval(bits).lo * epsilon_star.lo
    x0_required = ceil_rational(1 / smallest)
    return ThresholdResult(
        K_target=K_target,
        mode=mode,
        fraction=fraction,
        epsilon_star=epsilon_star,
        x0_required=x0_required,
        precision_bits=bits
    )


def x0_threshold(
    K_target: int,  # pylint: disable=invalid-name
    mode: ThresholdMode = ThresholdMode.WEIGHTED,
    precision_bits: Optional[int] = None,
    precision_ceiling: int = DEFAULT_PRECISION_CEILING
) -> ThresholdResult:
    """Invert the X0-only epsilon bound at the gap above delta.

    Every fraction in (delta, delta + epsilon_star) has denominator at
    least K_target, so any X0 with 1 / (c log 2 X0) <= epsilon_star gives
    K >= K_target for every cycle.

    Parameters
    ----------
    K_target : int
        At least 2.
    mode : ThresholdMode
        WEIGHTED and THEOREM20 invert 1 / (4 log 2 X0), LEGACY inverts 1 / (3 log 2 X0).
    precision_bits : int, optional
        First precision to try; defaults to the configured default.
    precision_ceiling : int
        Highest precision to try.

    Returns
    -------
    ThresholdResult
        epsilon_star and the rounded-up X0.

    Raises
    ------
    ValueError
        If ``K_target < 2``.
    """
    if K_target < 2:
        raise ValueError(f"K_target must be at least 2, got {K_target}")
    mode = ThresholdMode(mode)
    result, _ = run_with_precision_retry(
        lambda bits: _threshold(int(K_target), mode, bits),
        precision_bits or default_precision_bits(),
        precision_ceiling
    )
    logger.info(
        "K >= %d needs X0 >= %s * 2^60 (%s)",
        K_target, format_scientific(result.x0_in_units_of_2_60, 6, "up"), mode.value
    )
    return result
