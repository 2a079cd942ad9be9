"""Continued-fraction expansion of interval-valued reals."""

from dataclasses import dataclass
from typing import List, Tuple

from gmpy2 import mpq

from cyclebound.errors import InsufficientPrecisionError
from cyclebound.numerics.rational import floor_rational
from cyclebound.numerics.real_interval import RealInterval


@dataclass(frozen=True)
class ContinuedFraction:
    """Partial quotients [a0; a1, a2, ...].

    Attributes
    ----------
    partial_quotients : tuple[int, ...]
        a0 >= 0 and ai >= 1 for i >= 1.
    exact : bool
        The quotients are the complete expansion of a rational.
    precision_exhausted : bool
        Expansion stopped because the enclosure no longer fixed the next
        quotient.
    """
    partial_quotients: Tuple[int, ...]
    exact: bool = False
    precision_exhausted: bool = False

    def __post_init__(self):
        if not self.partial_quotients:
            raise ValueError("a continued fraction needs at least one quotient")
        if self.partial_quotients[0] < 0:
            raise ValueError(f"a0 must be nonnegative, got {self.partial_quotients[0]}")
        if any(a < 1 for a in self.partial_quotients[1:]):
            raise ValueError("partial quotients after a0 must be positive")

    def __len__(self) -> int:
        return len(self.partial_quotients)

    def __str__(self) -> str:
        head, *tail = self.partial_quotients
        if not tail:
            return f"[{head}]"
        return f"[{head}; {', '.join(str(a) for a in tail)}]"


def cf_expand(x: RealInterval, max_terms: int) -> ContinuedFraction:
    """Expand an enclosure while both endpoints agree on each quotient.

    Parameters
    ----------
    x : RealInterval
        Enclosure of a positive real.
    max_terms : int
        Maximum number of quotients to emit.

    Returns
    -------
    ContinuedFraction
        The certified prefix. ``exact`` is set when the expansion of a
        rational ran to completion; ``precision_exhausted`` when the
        endpoints started to disagree.

    Raises
    ------
    ValueError
        If ``x.lo <= 0`` or ``max_terms < 1``.
    InsufficientPrecisionError
        If the endpoints already disagree on a0.
    """
    if x.lo <= 0:
        raise ValueError(f"cf_expand requires a positive interval, got {x}")
    if max_terms < 1:
        raise ValueError(f"max_terms must be positive, got {max_terms}")

    lo, hi = x.lo, x.hi
    quotients: List[int] = []
    exact = False
    exhausted = False
    while len(quotients) < max_terms:
        a = floor_rational(lo)
        if floor_rational(hi) != a:
            if not quotients:
                raise InsufficientPrecisionError(
                    f"insufficient precision: endpoints of {x} disagree on the integer part"
                )
            exhausted = True
            break
        quotients.append(a)
        frac_lo, frac_hi = lo - a, hi - a
        if frac_hi == 0:
            exact = True
            break
        if frac_lo == 0:
            # lo terminates here while hi continues
            exhausted = True
            break
        lo, hi = 1 / frac_hi, 1 / frac_lo

    return ContinuedFraction(tuple(quotients), exact=exact, precision_exhausted=exhausted)


def convergent_pairs(quotients: Tuple[int, ...]) -> List[Tuple[int, int]]:
    """Numerator/denominator pairs (p_k, q_k) from the standard recurrence."""
    if not quotients:
        raise ValueError("convergents need at least one partial quotient")
    pairs = []
    p_prev, p_prev2 = 1, 0
    q_prev, q_prev2 = 0, 1
    for a in quotients:
        p, q = a * p_prev + p_prev2, a * q_prev + q_prev2
        pairs.append((p, q))
        p_prev2, p_prev = p_prev, p
        q_prev2, q_prev = q_prev, q
    return pairs


def convergents(cf: ContinuedFraction) -> List[mpq]:
    """Exact convergents p_k/q_k of ``cf``, each in lowest terms."""
    return [mpq(p, q) for p, q in convergent_pairs(cf.partial_quotients)]
