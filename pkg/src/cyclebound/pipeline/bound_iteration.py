"""Iterate lower bounds on the odd members of an m-cycle."""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import partial
from typing import List, Optional, Tuple

import pandas as pd
from gmpy2 import mpq

from cyclebound.contfrac.smallest_denominator import smallest_denominator_in_open_interval
from cyclebound.numerics.constants import delta_interval
from cyclebound.numerics.precision import require, run_with_precision_retry
from cyclebound.numerics.rational import format_scientific, scale_pow2
from cyclebound.numerics.real_interval import RealInterval, cmp_conservative, log_interval
from cyclebound.pipeline.epsilon_manager import EpsilonManager
from cyclebound.pipeline.global_config import GlobalConfig

logger = logging.getLogger(__name__)

# Published constant of the known upper bound K < 1.4784 m delta**m.
SW_CONSTANT = mpq(14784, 10000)
# Odd-member count known for every cycle with at most 91 minima.
DEFAULT_K_START = 7 * 10 ** 11
# delta**m is only expanded exactly up to this m.
SW_DIRECT_LIMIT = 10 ** 6


class Verdict(Enum):
    """Outcome of one round."""
    IMPROVED = "IMPROVED"
    FIXED_POINT = "FIXED_POINT"
    CONTRADICTION = "CONTRADICTION"


@dataclass(frozen=True)
class BoundReport:
    """One round of the bound iteration.

    Attributes
    ----------
    m : int
        Number of local minima.
    K_in : int
        Lower bound entering the round.
    m2 : int
        Longest admissible window of large minima, 0 if none.
    v : RealInterval, optional
        Exponent of the window bound.
    epsilon : RealInterval
        Enclosure of the epsilon bound.
    K_out : int
        Smallest denominator of a fraction in (delta, delta + epsilon).
    verdict : Verdict
        IMPROVED, FIXED_POINT or CONTRADICTION.
    epsilon_source : str
        Which bound produced epsilon.
    precision_bits : int
        Precision at which every comparison of the round was decided.
    clamped : bool
        Epsilon was raised to the resolution floor of the precision.
    """
    m: int
    K_in: int  # pylint: disable=invalid-name
    m2: int
    v: Optional[RealInterval]
    epsilon: RealInterval
    K_out: int  # pylint: disable=invalid-name
    verdict: Verdict
    epsilon_source: str
    precision_bits: int
    clamped: bool = False

    @property
    def bound(self) -> int:
        """Best lower bound known after the round."""
        return max(self.K_in, self.K_out)

    def to_dict(self) -> dict:
        """Plain strings, safe for JSON and CSV."""
        return {
            "m": str(self.m),
            "K_in": str(self.K_in),
            "m2": str(self.m2),
            "v_lower": "" if self.v is None else format_scientific(self.v.lo, 6, "down"),
            "epsilon_upper": format_scientific(self.epsilon.hi, 6, "up"),
            "K_out": str(self.K_out),
            "verdict": self.verdict.value,
            "epsilon_source": self.epsilon_source,
            "precision_bits": str(self.precision_bits),
            "clamped": str(self.clamped).lower(),
        }


def sw_upper_bound(m: int, precision_bits: int = 384) -> RealInterval:
    """Enclosure of 1.4784 m delta**m.

    Raises
    ------
    ValueError
        If ``m < 1`` or ``m`` exceeds SW_DIRECT_LIMIT; use
        :func:`sw_log_upper_bound` for those.
    """
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    if m > SW_DIRECT_LIMIT:
        raise ValueError(f"m={m} is too large to expand delta**m; use sw_log_upper_bound")
    return delta_interval(precision_bits) ** m * (SW_CONSTANT * m)


def sw_log_upper_bound(m: int, precision_bits: int = 384) -> RealInterval:
    """Enclosure of log(1.4784 m) + m log(delta)."""
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    scale = log_interval(RealInterval.exact(SW_CONSTANT * m, precision_bits))
    return scale + log_interval(delta_interval(precision_bits)) * m


def exceeds_sw_bound(m: int, K: int, precision_bits: int) -> bool:  # pylint: disable=invalid-name
    """True when K is decided to exceed the upper bound for an m-cycle."""
    upper = sw_log_upper_bound(m, precision_bits)
    count = log_interval(RealInterval.exact(K, precision_bits))
    return require(cmp_conservative(upper, count), f"K={K} above the bound for m={m}")


def denominator_bound(epsilon_upper: mpq, bits: int) -> Tuple[int, bool]:
    """Smallest denominator of a fraction in (delta, delta + epsilon_upper).

    Every cycle has K at least this value when (K+L)/K - delta is below
    ``epsilon_upper``. Epsilons under 2**-(bits // 2) are raised to that
    floor, which can only lower the result; the flag reports it.

    Returns
    -------
    tuple[int, bool]
        The denominator and whether epsilon was raised.
    """
    floor = scale_pow2(mpq(1), -(bits // 2))
    clamped = epsilon_upper < floor
    width = max(epsilon_upper, floor)
    if clamped:
        logger.debug("epsilon %s raised to 2^-%d", format_scientific(epsilon_upper, 3, "up"), bits // 2)
    alpha = delta_interval(bits)
    beta = RealInterval(alpha.lo + width, alpha.hi + width, bits)
    return int(smallest_denominator_in_open_interval(alpha, beta).denominator), clamped


class BoundIteration:
    """Repeat the epsilon and continued-fraction steps until K stops growing.

    Parameters
    ----------
    m : int
        Number of local minima, at least 1.
    K_start : int
        A lower bound on K known beforehand.
    config : GlobalConfig
        Mode, X0 and precision settings.

    Attributes
    ----------
    m : int
        Number of local minima.
    K_start : int
        The starting bound.
    config : GlobalConfig
        The configuration.
    epsilon_manager : EpsilonManager
        Computes epsilon for the configured mode.
    reports : list[BoundReport]
        One entry per completed round.

    Raises
    ------
    ValueError
        If ``m`` or ``K_start`` is not positive.
    """
    def __init__(self, m: int, K_start: int, config: GlobalConfig):  # pylint: disable=invalid-name
        if m < 1:
            raise ValueError(f"m must be positive, got {m}")
        if K_start < 1:
            raise ValueError(f"K_start must be positive, got {K_start}")
        self.m = m
        self.K_start = int(K_start)  # pylint: disable=invalid-name
        self.config = config
        self.epsilon_manager = EpsilonManager(config)
        self.reports: List[BoundReport] = []

    @property
    def final_bound(self) -> int:
        """Largest lower bound reached."""
        return max([self.K_start] + [report.bound for report in self.reports])

    @property
    def verdict(self) -> Optional[Verdict]:
        return self.reports[-1].verdict if self.reports else None

    def run(self) -> List[BoundReport]:
        """The main loop of the bound iteration."""
        K = self.K_start  # pylint: disable=invalid-name
        for round_number in range(1, self.config.max_rounds + 1):
            report, bits = run_with_precision_retry(
                partial(self._round, K),
                self.config.precision_bits,
                self.config.precision_ceiling
            )
            self.reports.append(report)
            logger.info(
                "m=%d round %d at %d bits: m2=%d epsilon <= %s K >= %d (%s)",
                self.m, round_number, bits, report.m2,
                format_scientific(report.epsilon.hi, 3, "up"), report.K_out,
                report.verdict.value
            )
            if report.verdict is not Verdict.IMPROVED:
                break
            K = report.K_out  # pylint: disable=invalid-name
        else:
            logger.warning(
                "m=%d: still improving after %d rounds", self.m, self.config.max_rounds
            )
        return self.reports

    def _round(self, K_in: int, bits: int) -> BoundReport:  # pylint: disable=invalid-name
        epsilon = self.epsilon_manager.best_bound(self.m, K_in, bits)
        K_out, clamped = denominator_bound(epsilon.epsilon.hi, bits)  # pylint: disable=invalid-name

        if exceeds_sw_bound(self.m, max(K_in, K_out), bits):
            verdict = Verdict.CONTRADICTION
        elif K_out > K_in:
            verdict = Verdict.IMPROVED
        else:
            verdict = Verdict.FIXED_POINT
        return BoundReport(
            m=self.m,
            K_in=K_in,
            m2=epsilon.m2,
            v=epsilon.v,
            epsilon=epsilon.epsilon,
            K_out=int(K_out),
            verdict=verdict,
            epsilon_source=epsilon.source,
            precision_bits=bits,
            clamped=clamped
        )

    def to_dataframe(self) -> pd.DataFrame:
        """One row per round."""
        columns = [
            "m", "K_in", "m2", "v_lower", "epsilon_upper", "K_out",
            "verdict", "epsilon_source", "precision_bits", "clamped"
        ]
        return pd.DataFrame([report.to_dict() for report in self.reports], columns=columns)


def iterate_bounds(
    m: int,
    K_start: int = DEFAULT_K_START,  # pylint: disable=invalid-name
    config: Optional[GlobalConfig] = None
) -> List[BoundReport]:
    """Improve a lower bound on K for an m-cycle until it stops changing.

    Each round picks the longest window of large minima, bounds
    (K+L)/K - delta by epsilon, and takes the smallest denominator of a
    fraction in (delta, delta + epsilon) as the new bound.

    Parameters
    ----------
    m : int
        Number of local minima.
    K_start : int
        A lower bound known beforehand.
    config : GlobalConfig, optional
        Defaults to ``GlobalConfig()``.

    Returns
    -------
    list[BoundReport]
        The rounds; the last verdict is CONTRADICTION when the bound
        passed the known upper bound, FIXED_POINT when a round gave no
        improvement, and IMPROVED when the round cap was hit.
    """
    iteration = BoundIteration(m, K_start, config or GlobalConfig())
    return iteration.run()
