"""Closed real intervals with exact rational endpoints and outward rounding."""

from dataclasses import dataclass
from typing import Callable, Tuple, Union

import gmpy2
from gmpy2 import mpq

from cyclebound.errors import InsufficientPrecisionError
from cyclebound.numerics.precision import DEFAULT_PRECISION_BITS
from cyclebound.numerics.rational import (
    Rational,
    RationalLike,
    binary_exponent,
    format_scientific,
    round_down,
    round_up,
    to_rational,
)
from cyclebound.numerics.tristate import TriState

# Integer powers above this exponent go through MPFR instead of exact pow.
EXACT_POWER_LIMIT = 4096


@dataclass(frozen=True)
class RealInterval:
    """A closed interval [lo, hi] known to contain a real number.

    Endpoints are exact rationals. After each operation they are rounded
    outward to ``precision_bits`` significant bits, so the true value stays
    enclosed while the endpoint sizes stay bounded.

    Parameters
    ----------
    lo : mpq
        Lower endpoint.
    hi : mpq
        Upper endpoint.
    precision_bits : int
        Working precision carried into derived intervals.

    Raises
    ------
    ValueError
        If ``lo > hi``.
    """
    lo: Rational
    hi: Rational
    precision_bits: int = DEFAULT_PRECISION_BITS

    def __post_init__(self):
        object.__setattr__(self, "lo", to_rational(self.lo))
        object.__setattr__(self, "hi", to_rational(self.hi))
        if self.lo > self.hi:
            raise ValueError(
                f"interval endpoints out of order: lo={self.lo} > hi={self.hi}"
            )
        if self.precision_bits < 1:
            raise ValueError(
                f"precision_bits must be positive, got {self.precision_bits}"
            )

    @classmethod
    def exact(cls, value: RationalLike, precision_bits: int = DEFAULT_PRECISION_BITS) -> "RealInterval":
        """The degenerate interval [value, value]."""
        value = to_rational(value)
        return cls(value, value, precision_bits)

    @classmethod
    def rounded(cls, lo: Rational, hi: Rational, precision_bits: int) -> "RealInterval":
        """Build an interval after rounding ``lo`` down and ``hi`` up."""
        return cls(
            round_down(lo, precision_bits),
            round_up(hi, precision_bits),
            precision_bits
        )

    @property
    def width(self) -> Rational:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Rational:
        return (self.lo + self.hi) / 2

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, value: Union[RationalLike, "RealInterval"]) -> bool:
        """True if ``value`` (a rational or an interval) lies inside."""
        if isinstance(value, RealInterval):
            return self.lo <= value.lo and value.hi <= self.hi
        value = to_rational(value)
        return self.lo <= value <= self.hi

    def intersect(self, other: "RealInterval") -> "RealInterval":
        """Intersection of two enclosures of the same quantity."""
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            raise ValueError(f"enclosures do not intersect: {self} and {other}")
        return RealInterval(lo, hi, max(self.precision_bits, other.precision_bits))

    def with_precision(self, precision_bits: int) -> "RealInterval":
        return RealInterval.rounded(self.lo, self.hi, precision_bits)

    def _coerce(self, other) -> "RealInterval":
        if isinstance(other, RealInterval):
            return other
        return RealInterval.exact(other, self.precision_bits)

    def _combine(self, other: "RealInterval", lo: Rational, hi: Rational) -> "RealInterval":
        return RealInterval.rounded(
            lo, hi, max(self.precision_bits, other.precision_bits)
        )

    def __neg__(self) -> "RealInterval":
        return RealInterval(-self.hi, -self.lo, self.precision_bits)

    def __add__(self, other) -> "RealInterval":
        other = self._coerce(other)
        return self._combine(other, self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other) -> "RealInterval":
        other = self._coerce(other)
        return self._combine(other, self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other) -> "RealInterval":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RealInterval":
        other = self._coerce(other)
        products = (
            self.lo * other.lo, self.lo * other.hi,
            self.hi * other.lo, self.hi * other.hi
        )
        return self._combine(other, min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self) -> "RealInterval":
        """Enclosure of 1/x.

        Raises
        ------
        ZeroDivisionError
            If the interval is exactly zero.
        InsufficientPrecisionError
            If the interval straddles zero.
        """
        if self.lo == 0 and self.hi == 0:
            raise ZeroDivisionError("reciprocal of the zero interval")
        if self.lo <= 0 <= self.hi:
            raise InsufficientPrecisionError(
                f"insufficient precision: divisor interval {self} contains zero"
            )
        return RealInterval.rounded(1 / self.hi, 1 / self.lo, self.precision_bits)

    def __truediv__(self, other) -> "RealInterval":
        other = self._coerce(other)
        return self * other.reciprocal()

    def __rtruediv__(self, other) -> "RealInterval":
        return self._coerce(other) / self

    def __pow__(self, exponent: int) -> "RealInterval":
        if not isinstance(exponent, int) or isinstance(exponent, bool):
            raise TypeError("use interval_pow for non-integer exponents")
        if exponent < 0:
            return (self ** -exponent).reciprocal()
        if exponent == 0:
            return RealInterval.exact(1, self.precision_bits)
        if exponent > EXACT_POWER_LIMIT:
            return interval_pow(self, RealInterval.exact(exponent, self.precision_bits))
        low, high = self.lo ** exponent, self.hi ** exponent
        if self.lo >= 0:
            return RealInterval.rounded(low, high, self.precision_bits)
        if self.hi <= 0:
            if exponent % 2 == 0:
                return RealInterval.rounded(high, low, self.precision_bits)
            return RealInterval.rounded(low, high, self.precision_bits)
        if exponent % 2 == 0:
            return RealInterval.rounded(mpq(0), max(low, high), self.precision_bits)
        return RealInterval.rounded(low, high, self.precision_bits)

    def to_strings(self, digits: int = 6) -> Tuple[str, str]:
        """Endpoints as decimals rounded outward."""
        return (
            format_scientific(self.lo, digits, "down"),
            format_scientific(self.hi, digits, "up")
        )

    def __str__(self) -> str:
        lo, hi = self.to_strings()
        return f"[{lo}, {hi}]"


def cmp_conservative(a: RealInterval, b: RealInterval) -> TriState:
    """Decide ``a < b`` for the enclosed reals.

    Returns
    -------
    TriState
        ``TRUE`` iff ``a.hi < b.lo``, ``FALSE`` iff ``a.lo > b.hi``, and
        ``UNKNOWN`` when the enclosures overlap.
    """
    if a.hi < b.lo:
        return TriState.TRUE
    if a.lo > b.hi:
        return TriState.FALSE
    return TriState.UNKNOWN


def _mpfr_to_rational(value) -> Rational:
    if not gmpy2.is_finite(value):
        raise InsufficientPrecisionError(
            f"insufficient precision: MPFR produced a non-finite value {value}"
        )
    numerator, denominator = value.as_integer_ratio()
    return mpq(numerator, denominator)


def _directed(func: Callable, argument: Rational, bits: int, upward: bool) -> Rational:
    """Evaluate a monotone increasing MPFR function rounded in one direction."""
    rounding = gmpy2.RoundUp if upward else gmpy2.RoundDown
    with gmpy2.context(
        precision=bits,
        round=rounding,
        emin=gmpy2.get_emin_min(),
        emax=gmpy2.get_emax_max()
    ):
        # the conversion rounds in the same direction as the function
        return _mpfr_to_rational(func(gmpy2.mpfr(argument)))


def _guard_bits(x: RealInterval) -> int:
    largest = max(abs(x.lo), abs(x.hi))
    magnitude = binary_exponent(largest) + 1 if largest != 0 else 0
    return 64 + max(0, magnitude)


def log_interval(x: RealInterval) -> RealInterval:
    """Enclosure of the natural logarithm.

    Raises
    ------
    ValueError
        If the interval is not strictly positive.
    """
    if x.lo <= 0:
        raise ValueError(f"log_interval requires a positive interval, got {x}")
    bits = x.precision_bits + 64
    return RealInterval.rounded(
        _directed(gmpy2.log, x.lo, bits, upward=False),
        _directed(gmpy2.log, x.hi, bits, upward=True),
        x.precision_bits
    )


def exp_interval(x: RealInterval) -> RealInterval:
    """Enclosure of the exponential function."""
    bits = x.precision_bits + _guard_bits(x)
    return RealInterval.rounded(
        _directed(gmpy2.exp, x.lo, bits, upward=False),
        _directed(gmpy2.exp, x.hi, bits, upward=True),
        x.precision_bits
    )


def interval_pow(base: RealInterval, exponent: Union[RealInterval, RationalLike]) -> RealInterval:
    """Enclosure of ``base ** exponent`` for a positive base.

    Small integer exponents are evaluated exactly; everything else goes
    through ``exp(exponent * log(base))`` with directed rounding.

    Parameters
    ----------
    base : RealInterval
        Strictly positive base, unless the exponent is a small integer.
    exponent : RealInterval or rational
        The exponent.

    Returns
    -------
    RealInterval
        An enclosure of the power.

    Raises
    ------
    ValueError
        If a non-integer power of a non-positive base is requested.
    """
    if not isinstance(exponent, RealInterval):
        exponent = RealInterval.exact(exponent, base.precision_bits)
    if exponent.is_exact and exponent.lo.denominator == 1:
        power = int(exponent.lo.numerator)
        if abs(power) <= EXACT_POWER_LIMIT:
            return base ** power
    if base.lo <= 0:
        raise ValueError(f"interval_pow requires a positive base, got {base}")
    precision = max(base.precision_bits, exponent.precision_bits)
    working = precision + _guard_bits(exponent)
    log_base = log_interval(base.with_precision(working))
    product = exponent.with_precision(working) * log_base
    return exp_interval(product).with_precision(precision)
