"""Certified enclosures of log 2, log 3 and delta = log2(3).

The logarithms are summed from atanh series in integer fixed point, so
every truncation error is counted explicitly and no floating-point
library is trusted for the constants the whole certificate rests on.
"""

from functools import lru_cache
from typing import Tuple

from gmpy2 import mpq, mpz

from cyclebound.numerics.precision import MIN_PRECISION_BITS
from cyclebound.numerics.rational import ceil_rational, floor_rational, scale_pow2
from cyclebound.numerics.real_interval import RealInterval

_BASE_LEVEL = 128


def _atanh_inverse(q: int, bits: int) -> Tuple[mpq, mpq]:
    """Enclose atanh(1/q) for an integer q >= 2 with error below 2**-bits.

    Sums 1/((2j+1) q**(2j+1)) in fixed point with ``bits`` plus guard bits.
    Each floored term loses less than one unit and the geometric tail after
    the first zero term is below two units.
    """
    guard = bits + bits.bit_length() + 8
    scale = mpz(1) << guard
    q_squared = mpz(q) * q
    power = mpz(q)
    total = mpz(0)
    terms = 0
    j = 0
    while True:
        term = scale // (power * (2 * j + 1))
        if term == 0:
            break
        total += term
        terms += 1
        j += 1
        power *= q_squared
    return mpq(total, scale), mpq(total + terms + 2, scale)


@lru_cache(maxsize=None)
def _log_bounds(level: int) -> Tuple[mpq, mpq, mpq, mpq]:
    """Return (log2_lo, log2_hi, log3_lo, log3_hi) at absolute error 2**-level."""
    # log 2 = 2 atanh(1/3); log 3 - log 2 = log(3/2) = 2 atanh(1/5)
    third_lo, third_hi = _atanh_inverse(3, level)
    fifth_lo, fifth_hi = _atanh_inverse(5, level)
    log2_lo, log2_hi = 2 * third_lo, 2 * third_hi
    return log2_lo, log2_hi, log2_lo + 2 * fifth_lo, log2_hi + 2 * fifth_hi


@lru_cache(maxsize=None)
def _delta_bounds(level: int) -> Tuple[mpq, mpq]:
    """Enclosure of log2(3), intersected with every coarser level."""
    log2_lo, log2_hi, log3_lo, log3_hi = _log_bounds(level)
    lo, hi = log3_lo / log2_hi, log3_hi / log2_lo
    if level > _BASE_LEVEL:
        coarse_lo, coarse_hi = _delta_bounds(level // 2)
        lo, hi = max(lo, coarse_lo), min(hi, coarse_hi)
    return lo, hi


def _level_for(precision_bits: int) -> int:
    """Smallest power-of-two level leaving 64 guard bits."""
    if precision_bits < MIN_PRECISION_BITS:
        raise ValueError(
            f"precision_bits must be at least {MIN_PRECISION_BITS}, "
            f"got {precision_bits}"
        )
    level = _BASE_LEVEL
    while level < precision_bits + 64:
        level *= 2
    return level


def _to_grid(lo: mpq, hi: mpq, precision_bits: int) -> RealInterval:
    """Round outward onto the grid of multiples of 2**-precision_bits."""
    grid_lo = scale_pow2(mpq(floor_rational(scale_pow2(lo, precision_bits))), -precision_bits)
    grid_hi = scale_pow2(mpq(ceil_rational(scale_pow2(hi, precision_bits))), -precision_bits)
    return RealInterval(grid_lo, grid_hi, precision_bits)


def delta_interval(precision_bits: int) -> RealInterval:
    """Enclosure of delta = log2(3) of width at most 2**(1 - precision_bits).

    Raising ``precision_bits`` never widens the result: every finer
    enclosure is contained in every coarser one.

    Parameters
    ----------
    precision_bits : int
        Requested precision, at least 16.

    Returns
    -------
    RealInterval
        The enclosure.

    Raises
    ------
    ValueError
        If ``precision_bits`` is below 16.
    """
    lo, hi = _delta_bounds(_level_for(precision_bits))
    return _to_grid(lo, hi, precision_bits)


def log2_interval(precision_bits: int) -> RealInterval:
    """Enclosure of the natural logarithm of 2."""
    log2_lo, log2_hi, _, _ = _log_bounds(_level_for(precision_bits))
    return _to_grid(log2_lo, log2_hi, precision_bits)


def log3_interval(precision_bits: int) -> RealInterval:
    """Enclosure of the natural logarithm of 3."""
    _, _, log3_lo, log3_hi = _log_bounds(_level_for(precision_bits))
    return _to_grid(log3_lo, log3_hi, precision_bits)
