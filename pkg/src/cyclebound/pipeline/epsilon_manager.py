"""Upper bounds on (K+L)/K - delta for a hypothetical cycle."""

import logging
from dataclasses import dataclass
from typing import Dict, Callable, List, Optional

from gmpy2 import mpq

from cyclebound.numerics.constants import delta_interval, log2_interval
from cyclebound.numerics.precision import run_with_precision_retry
from cyclebound.numerics.rational import floor_rational, scale_pow2
from cyclebound.numerics.real_interval import (
    RealInterval,
    cmp_conservative,
    interval_pow,
    log_interval,
)
from cyclebound.numerics.tristate import TriState
from cyclebound.pipeline.global_config import GlobalConfig, TConstantMode

logger = logging.getLogger(__name__)

# Large minima are at least (162/97) X0 once a window of them is long enough.
LARGE_MINIMUM_FACTOR = mpq(162, 97)
# Above this v the powers 2**v are replaced by dyadic bounds.
LARGE_V = 1024


def partial_sum_total(m1: int, mode: TConstantMode) -> mpq:
    """Bound c on the sum of T over m1 consecutive minima, as c / X0.

    Parameters
    ----------
    m1 : int
        Number of consecutive minima, at least 1.
    mode : TConstantMode
        ANALYTIC_97_54 gives (97 m1 + 73) / 54 for any stretch of minima.
        COMPUTER_1 gives m1, valid for the full set of minima of a cycle.

    Returns
    -------
    mpq
        The coefficient total.

    Raises
    ------
    ValueError
        If ``m1 < 1``, or for WEIGHTED_3_4, whose average is per odd step
        and has no total per minimum.
    """
    if m1 < 1:
        raise ValueError(f"m1 must be positive, got {m1}")
    if mode is TConstantMode.ANALYTIC_97_54:
        return mpq(97 * m1 + 73, 54)
    if mode is TConstantMode.COMPUTER_1:
        return mpq(m1)
    raise ValueError(f"{mode.value} averages per odd step; no total per minimum")


@dataclass(frozen=True)
class EpsilonBound:
    """An epsilon enclosure and where it came from.

    Attributes
    ----------
    m2 : int
        Length of the window of large minima; 0 when none was used.
    v : RealInterval, optional
        The exponent with 2**v - 1 <= the first large minimum.
    epsilon : RealInterval
        Enclosure of the bound; its upper endpoint is the one used.
    source : str
        ``"window"`` or the value of the T-constant mode.
    """
    m2: int
    v: Optional[RealInterval]
    epsilon: RealInterval
    source: str


class EpsilonManager:
    """Compute epsilon using the bound that belongs to the configured mode.

    The bounds are:
        - window: a run of m2 consecutive minima must be large
        - analytic: average T of 97/54 per minimum
        - computer1: average T of 1 per minimum
        - weighted: average T of 3/4 per odd step, independent of m

    Parameters
    ----------
    config : GlobalConfig
        Supplies X0 and the mode.

    Attributes
    ----------
    zero_window_methods : dict[TConstantMode, Callable]
        Maps each mode to the bound used when no window exists.
    config : GlobalConfig
        The configuration.

    Raises
    ------
    ValueError
        If the mode has no bound method.
    """
    def __init__(self, config: GlobalConfig):
        self.zero_window_methods: Dict[TConstantMode, Callable[[int, int, int], RealInterval]] = {
            TConstantMode.ANALYTIC_97_54: self.analytic_bound,
            TConstantMode.COMPUTER_1: self.computer_bound,
            TConstantMode.WEIGHTED_3_4: self.weighted_bound,
        }
        self.config = config
        if config.t_constant_mode not in self.zero_window_methods:
            raise ValueError(f"no epsilon bound for mode {config.t_constant_mode}")

    def _prefactor(self, K: int, bits: int) -> RealInterval:  # pylint: disable=invalid-name
        """1 / (3 K log 2)."""
        return (log2_interval(bits) * (3 * K)).reciprocal()

    def analytic_bound(self, m: int, K: int, bits: int) -> RealInterval:  # pylint: disable=invalid-name
        total = RealInterval.exact(mpq(97 * m, 54 * self.config.x0), bits)
        return total * self._prefactor(K, bits)

    def computer_bound(self, m: int, K: int, bits: int) -> RealInterval:  # pylint: disable=invalid-name
        total = RealInterval.exact(partial_sum_total(m, TConstantMode.COMPUTER_1) / self.config.x0, bits)
        return total * self._prefactor(K, bits)

    def weighted_bound(self, m: int, K: int, bits: int) -> RealInterval:  # pylint: disable=invalid-name,unused-argument
        # the K in the average cancels against the prefactor
        denominator = log2_interval(bits) * (4 * self.config.x0)
        return denominator.reciprocal()

    def zero_window_bound(self, m: int, K: int, bits: int) -> RealInterval:  # pylint: disable=invalid-name
        """Epsilon from the mode's average T bound alone."""
        return self.zero_window_methods[self.config.t_constant_mode](m, K, bits)

    def _log2_large_minimum(self, bits: int) -> RealInterval:
        floor = RealInterval.exact(LARGE_MINIMUM_FACTOR * self.config.x0, bits)
        return log_interval(floor) / log2_interval(bits)

    def feasible_m2(self, m: int, K: int, bits: int) -> List[int]:  # pylint: disable=invalid-name
        """Every m2 >= 1 whose window inequality is decided TRUE.

        (delta**m2 - 1) / (delta - 1) * log2(162/97 X0) <= (m2/m) K.
        The left side grows faster in m2 than the right, so the admissible
        m2 form an initial segment; the scan stops at the first failure.
        """
        delta = delta_interval(bits)
        threshold = self._log2_large_minimum(bits)
        step = (delta - 1).reciprocal()
        power = RealInterval.exact(1, bits)
        feasible = []
        for m2 in range(1, m + 1):
            power = power * delta
            lhs = (power - 1) * step * threshold
            rhs = RealInterval.exact(mpq(m2 * K, m), bits)
            if cmp_conservative(lhs, rhs) is not TriState.TRUE:
                break
            feasible.append(m2)
        return feasible

    def choose_m2(self, m: int, K: int, bits: int) -> int:  # pylint: disable=invalid-name
        """Longest admissible window, or 0 when there is none."""
        feasible = self.feasible_m2(m, K, bits)
        return feasible[-1] if feasible else 0

    def window_bound(self, m: int, K: int, m2: int, bits: int) -> EpsilonBound:  # pylint: disable=invalid-name
        """Epsilon when m2 >= 1 consecutive minima are known to be large."""
        delta = delta_interval(bits)
        v = RealInterval.exact(mpq(m2 * K, m), bits) * (delta - 1) / (delta ** m2 - 1)
        first, rest = _large_minimum_terms(v, delta)
        if m2 == m:
            total = first * 3 + rest * (3 * (m - 1))
        elif m2 == m - 1:
            total = RealInterval.exact(mpq(3, self.config.x0), bits) + first * 3 + rest * (3 * (m - 2))
        else:
            small = partial_sum_total(m - m2, TConstantMode.ANALYTIC_97_54) / self.config.x0
            total = RealInterval.exact(small, bits) + first * 3 + rest * (3 * (m2 - 1))
        return EpsilonBound(m2, v, total * self._prefactor(K, bits), "window")

    def epsilon_bound(self, m: int, K: int, m2: int, bits: int) -> EpsilonBound:  # pylint: disable=invalid-name
        """Epsilon for a given m2; m2 = 0 uses the mode's average bound."""
        if m2 == 0:
            epsilon = self.zero_window_bound(m, K, bits)
            return EpsilonBound(0, None, epsilon, self.config.t_constant_mode.value)
        return self.window_bound(m, K, m2, bits)

    def best_bound(self, m: int, K: int, bits: int) -> EpsilonBound:  # pylint: disable=invalid-name
        """The smallest epsilon upper endpoint available at this K."""
        average = self.epsilon_bound(m, K, 0, bits)
        feasible = self.feasible_m2(m, K, bits)
        if not feasible:
            logger.debug("m=%d K=%d: no window, epsilon <= %s", m, K, average.epsilon.to_strings()[1])
            return average
        lengths = feasible if self.config.scan_all_m2 else feasible[-1:]
        best = min(
            (self.window_bound(m, K, m2, bits) for m2 in lengths),
            key=lambda bound: bound.epsilon.hi
        )
        if average.epsilon.hi < best.epsilon.hi:
            best = EpsilonBound(best.m2, best.v, average.epsilon, average.source)
        logger.debug(
            "m=%d K=%d: m2=%d epsilon <= %s (%s)",
            m, K, best.m2, best.epsilon.to_strings()[1], best.source
        )
        return best


def _large_minimum_terms(v: RealInterval, delta: RealInterval):
    """Enclosures of 1 / (2**v - 1) and (2**v - 1) ** -delta."""
    bits = v.precision_bits
    if v.lo > LARGE_V:
        # 2**v - 1 >= 2**(v - 1); any smaller exponent still gives an upper bound
        exponent = min(floor_rational(v.lo) - 1, 4 * bits)
        first = RealInterval(mpq(0), scale_pow2(mpq(1), -exponent), bits)
        rest_exponent = floor_rational(exponent * delta.lo)
        rest = RealInterval(mpq(0), scale_pow2(mpq(1), -rest_exponent), bits)
        return first, rest
    size = interval_pow(RealInterval.exact(2, bits), v) - 1
    return size.reciprocal(), interval_pow(size, -delta)


def choose_m2(m: int, K: int, config: GlobalConfig) -> int:  # pylint: disable=invalid-name
    """Longest window of large minima the inequality admits for an m-cycle.

    Parameters
    ----------
    m : int
        Number of local minima, at least 1.
    K : int
        Known lower bound on the odd members, at least 1.
    config : GlobalConfig
        Supplies X0 and the precision.

    Returns
    -------
    int
        The largest m2 in [0, m] decided TRUE; 0 when no window qualifies.
    """
    _check_m_and_k(m, K)
    manager = EpsilonManager(config)
    m2, _ = run_with_precision_retry(
        lambda bits: manager.choose_m2(m, K, bits),
        config.precision_bits,
        config.precision_ceiling
    )
    return m2


def epsilon_bound(m: int, K: int, m2: int, config: GlobalConfig) -> RealInterval:  # pylint: disable=invalid-name
    """Rigorous enclosure of the epsilon bound for the given window length.

    Parameters
    ----------
    m : int
        Number of local minima.
    K : int
        Known lower bound on the odd members.
    m2 : int
        Window length from :func:`choose_m2`; 0 selects the mode's bound.
    config : GlobalConfig
        Supplies X0, the mode and the precision.

    Returns
    -------
    RealInterval
        Enclosure whose upper endpoint bounds (K+L)/K - delta.

    Raises
    ------
    ValueError
        If ``m2`` is outside [0, m].
    PrecisionExhaustedError
        If 2**v - 1 cannot be separated from zero at the precision ceiling.
    """
    _check_m_and_k(m, K)
    if not 0 <= m2 <= m:
        raise ValueError(f"m2 must lie in [0, {m}], got {m2}")
    manager = EpsilonManager(config)
    result, _ = run_with_precision_retry(
        lambda bits: manager.epsilon_bound(m, K, m2, bits),
        config.precision_bits,
        config.precision_ceiling
    )
    return result.epsilon


def _check_m_and_k(m: int, K: int) -> None:  # pylint: disable=invalid-name
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    if K < 1:
        raise ValueError(f"K must be positive, got {K}")
