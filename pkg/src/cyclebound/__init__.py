__version__ = "0.1.0"

from cyclebound.errors import (
    CheckpointError,
    CycleboundError,
    InsufficientPrecisionError,
    PrecisionExhaustedError,
)
from cyclebound.numerics.real_interval import RealInterval
from cyclebound.collatz.trajectory_profile import profile
from cyclebound.collatz.range_verifier import verify_range
from cyclebound.contfrac.smallest_denominator import (
    nearest_fraction_above,
    smallest_denominator_in_open_interval,
)
from cyclebound.case_engine.search_config import SearchConfig
from cyclebound.case_engine.search import prove_average_bound
from cyclebound.pipeline.global_config import GlobalConfig, TConstantMode
from cyclebound.pipeline.bound_iteration import BoundIteration, Verdict, iterate_bounds
from cyclebound.pipeline.table import generate_table
from cyclebound.pipeline.threshold import x0_threshold

__all__ = [
    '__version__',
    'CheckpointError',
    'CycleboundError',
    'InsufficientPrecisionError',
    'PrecisionExhaustedError',
    'RealInterval',
    'profile',
    'verify_range',
    'nearest_fraction_above',
    'smallest_denominator_in_open_interval',
    'SearchConfig',
    'prove_average_bound',
    'GlobalConfig',
    'TConstantMode',
    'BoundIteration',
    'Verdict',
    'iterate_bounds',
    'generate_table',
    'x0_threshold',
]
