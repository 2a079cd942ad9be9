"""Smallest-denominator fractions in open intervals with enclosed endpoints."""

from dataclasses import dataclass
from typing import List, Optional, Tuple

from gmpy2 import mpq

from cyclebound.contfrac.continued_fraction import cf_expand, convergent_pairs
from cyclebound.errors import InsufficientPrecisionError
from cyclebound.numerics.rational import floor_rational
from cyclebound.numerics.real_interval import RealInterval

# Upper bound on expansion steps; each step at least doubles a denominator.
_MAX_STEPS = 100_000


@dataclass(frozen=True)
class FractionInInterval:
    """A fraction p/q found strictly inside an open interval.

    Attributes
    ----------
    numerator : int
        p.
    denominator : int
        q >= 1, with gcd(p, q) = 1.
    prefix_length : int
        k, the length of the partial-quotient prefix shared by both ends.
    chosen_quotient : int
        c_k, the last partial quotient of the fraction.
    partial_quotients : tuple[int, ...]
        The full expansion [a0; ..., a_{k-1}, c_k].
    """
    numerator: int
    denominator: int
    prefix_length: int
    chosen_quotient: int
    partial_quotients: Tuple[int, ...] = ()

    @property
    def value(self) -> mpq:
        return mpq(self.numerator, self.denominator)


def _reciprocal_shift(lo: mpq, hi: Optional[mpq], a: int) -> Tuple[Optional[mpq], Optional[mpq]]:
    """Map an enclosure [lo, hi] of y > a to an enclosure of 1/(y - a).

    ``None`` stands for plus infinity, which is what an endpoint whose
    expansion stops at ``a`` turns into.
    """
    if hi is None:
        new_lo = mpq(0)
    elif hi == a:
        new_lo = None
    else:
        new_lo = 1 / (hi - a)
    new_hi = None if lo == a else 1 / (lo - a)
    return new_lo, new_hi


def smallest_denominator_in_open_interval(alpha: RealInterval, beta: RealInterval) -> FractionInInterval:
    """Fraction of least denominator strictly between alpha and beta.

    Walks the common continued-fraction prefix of both endpoints. At the
    first position k where the quotients differ, the answer ends with
    c_k = min(a_k, b_k) + 1; an endpoint whose expansion stops earlier
    counts as having quotient infinity there. The alternating
    orientation of the expansion handles the even and odd k cases.

    Parameters
    ----------
    alpha : RealInterval
        Enclosure of the lower endpoint.
    beta : RealInterval
        Enclosure of the upper endpoint.

    Returns
    -------
    FractionInInterval
        The fraction, verified to lie strictly between ``alpha.hi`` and
        ``beta.lo``.

    Raises
    ------
    ValueError
        If ``alpha`` lies certainly above ``beta``.
    InsufficientPrecisionError
        If the enclosures overlap or do not fix the next quotient.
    """
    if alpha.lo >= beta.hi:
        raise ValueError(f"empty open interval: alpha {alpha} is not below beta {beta}")
    if alpha.hi >= beta.lo:
        raise InsufficientPrecisionError(
            f"insufficient precision: enclosures {alpha} and {beta} overlap"
        )

    # x encloses the lower end, y the upper end; None means infinity.
    x_lo, x_hi = alpha.lo, alpha.hi
    y_lo, y_hi = beta.lo, beta.hi
    quotients: List[int] = []
    for _ in range(_MAX_STEPS):
        a = floor_rational(x_lo)
        if x_hi is None or floor_rational(x_hi) != a:
            raise InsufficientPrecisionError(
                f"insufficient precision: lower endpoint quotient {len(quotients)} is undetermined"
            )
        candidate = a + 1
        if y_lo is None or candidate < y_lo:
            quotients.append(candidate)
            break
        if y_hi is None or candidate < y_hi:
            raise InsufficientPrecisionError(
                f"insufficient precision: upper endpoint quotient {len(quotients)} is undetermined"
            )
        # both ends share the quotient a; flip into the next level
        quotients.append(a)
        next_x = _reciprocal_shift(y_lo, y_hi, a)
        next_y = _reciprocal_shift(x_lo, x_hi, a)
        (x_lo, x_hi), (y_lo, y_hi) = next_x, next_y
    else:
        raise InsufficientPrecisionError("continued fraction walk did not terminate")

    numerator, denominator = convergent_pairs(tuple(quotients))[-1]
    fraction = FractionInInterval(
        numerator=int(numerator),
        denominator=int(denominator),
        prefix_length=len(quotients) - 1,
        chosen_quotient=quotients[-1],
        partial_quotients=tuple(quotients)
    )
    if not alpha.hi < fraction.value < beta.lo:
        raise InsufficientPrecisionError(
            f"insufficient precision: {fraction.value} not certified inside ({alpha}, {beta})"
        )
    return fraction


def nearest_fraction_above(x: RealInterval, max_denominator: int, max_terms: int = 4096) -> mpq:
    """Least fraction strictly above an irrational x with denominator <= N.

    Uses the last odd-index convergent with denominator <= N and the
    semiconvergents that follow it.

    Parameters
    ----------
    x : RealInterval
        Enclosure of an irrational number.
    max_denominator : int
        N >= 1.
    max_terms : int
        Expansion length cap.

    Returns
    -------
    mpq
        The fraction.

    Raises
    ------
    ValueError
        If ``max_denominator < 1`` or ``x`` is an exact rational.
    InsufficientPrecisionError
        If the enclosure is too wide to fix the convergents needed.
    """
    if max_denominator < 1:
        raise ValueError(f"max_denominator must be positive, got {max_denominator}")
    if x.is_exact:
        raise ValueError("nearest_fraction_above expects an enclosure of an irrational")

    cf = cf_expand(x, max_terms)
    pairs = convergent_pairs(cf.partial_quotients)
    if pairs[-1][1] <= max_denominator:
        raise InsufficientPrecisionError(
            f"insufficient precision: expansion {cf} stops before denominators exceed {max_denominator}"
        )

    # index -1 stands for p/q = 1/0, which lies above everything
    best_index = -1
    for index, (_, q) in enumerate(pairs):
        if q > max_denominator:
            break
        if index % 2 == 1:
            best_index = index
    p_k, q_k = (1, 0) if best_index == -1 else pairs[best_index]
    p_next, q_next = pairs[best_index + 1]
    steps = (max_denominator - q_k) // q_next
    return mpq(p_k + steps * p_next, q_k + steps * q_next)
