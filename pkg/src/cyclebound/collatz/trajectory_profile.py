"""Record the successive local minima of a trajectory."""

import logging
from dataclasses import dataclass
from typing import Tuple

import pandas as pd
from gmpy2 import mpq, mpz

from cyclebound.collatz.dynamics import accel_odd_run, t_value, two_adic_valuation
from cyclebound.numerics.rational import rational_to_string

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MinimumRecord:
    """One local minimum n and the shape of the run that follows it.

    Attributes
    ----------
    n : int
        The odd local minimum.
    k : int
        Exact number of consecutive odd steps from ``n``.
    ell : int
        Exact number of halvings after the odd run.
    t_value : mpq
        Exact sum of the reciprocals of the odd values in the run.
    """
    n: int
    k: int
    ell: int
    t_value: mpq

    @property
    def next_minimum(self) -> int:
        a = mpz(self.n + 1) >> self.k
        return int((a * mpz(3) ** self.k - 1) >> self.ell)


@dataclass(frozen=True)
class TrajectoryProfile:
    """Successive local minima of a trajectory.

    Attributes
    ----------
    start : int
        First minimum.
    minima : tuple[MinimumRecord, ...]
        The recorded minima in trajectory order.
    truncated : bool
        The trajectory fell to 1, so no further minimum exists.
    trivial_start : bool
        The start is 1, which lies on the trivial cycle.
    """
    start: int
    minima: Tuple[MinimumRecord, ...]
    truncated: bool = False
    trivial_start: bool = False

    def __len__(self) -> int:
        return len(self.minima)

    def to_dataframe(self) -> pd.DataFrame:
        """One row per minimum; big values are kept as exact strings."""
        return pd.DataFrame(
            [
                {
                    "n": str(record.n),
                    "k": record.k,
                    "ell": record.ell,
                    "t_value": rational_to_string(record.t_value),
                }
                for record in self.minima
            ],
            columns=["n", "k", "ell", "t_value"]
        )


def profile(start: int, num_minima: int) -> TrajectoryProfile:
    """Follow ``start`` through ``num_minima`` local minima.

    Parameters
    ----------
    start : int
        Odd positive start value.
    num_minima : int
        Number of minima to record.

    Returns
    -------
    TrajectoryProfile
        The records; ``truncated`` is set when the last run ends at 1.

    Raises
    ------
    ValueError
        If ``start`` is not odd and positive or ``num_minima`` < 1.
    """
    if start <= 0 or start % 2 == 0:
        raise ValueError(f"profile requires an odd positive start, got {start}")
    if num_minima < 1:
        raise ValueError(f"num_minima must be positive, got {num_minima}")

    records = []
    n = start
    truncated = False
    while len(records) < num_minima:
        k, end = accel_odd_run(n)
        ell = two_adic_valuation(end)
        records.append(MinimumRecord(n=n, k=k, ell=ell, t_value=t_value(n)))
        n = end >> ell
        if n == 1:
            # the run fell into the trivial cycle
            truncated = True
            break

    if truncated:
        logger.debug("trajectory of %d reached 1 after %d minima", start, len(records))
    return TrajectoryProfile(
        start=start,
        minima=tuple(records),
        truncated=truncated,
        trivial_start=start == 1
    )
