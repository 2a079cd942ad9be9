from cyclebound.numerics.tristate import TriState
from cyclebound.numerics.rational import (
    Rational,
    RationalLike,
    to_rational,
    floor_rational,
    ceil_rational,
    format_scientific,
    rational_to_string,
)
from cyclebound.numerics.precision import (
    DEFAULT_PRECISION_BITS,
    DEFAULT_PRECISION_CEILING,
    PRECISION_ENV_VAR,
    default_precision_bits,
    require,
    run_with_precision_retry,
)
from cyclebound.numerics.real_interval import (
    RealInterval,
    cmp_conservative,
    exp_interval,
    interval_pow,
    log_interval,
)
from cyclebound.numerics.constants import delta_interval, log2_interval, log3_interval

__all__ = [
    "TriState",
    "Rational",
    "RationalLike",
    "to_rational",
    "floor_rational",
    "ceil_rational",
    "format_scientific",
    "rational_to_string",
    "DEFAULT_PRECISION_BITS",
    "DEFAULT_PRECISION_CEILING",
    "PRECISION_ENV_VAR",
    "default_precision_bits",
    "require",
    "run_with_precision_retry",
    "RealInterval",
    "cmp_conservative",
    "exp_interval",
    "interval_pow",
    "log_interval",
    "delta_interval",
    "log2_interval",
    "log3_interval",
]
