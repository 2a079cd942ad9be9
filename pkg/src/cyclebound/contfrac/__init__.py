from cyclebound.contfrac.continued_fraction import (
    ContinuedFraction,
    cf_expand,
    convergents,
    convergent_pairs,
)
from cyclebound.contfrac.smallest_denominator import (
    FractionInInterval,
    smallest_denominator_in_open_interval,
    nearest_fraction_above,
)

__all__ = [
    "ContinuedFraction",
    "cf_expand",
    "convergents",
    "convergent_pairs",
    "FractionInInterval",
    "smallest_denominator_in_open_interval",
    "nearest_fraction_above",
]
