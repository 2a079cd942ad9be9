from cyclebound.pipeline.global_config import (
    ANALYTIC_X0_FLOOR,
    DEFAULT_MAX_ROUNDS,
    VERIFIED_X0,
    GlobalConfig,
    TConstantMode,
)
from cyclebound.pipeline.epsilon_manager import (
    EpsilonBound,
    EpsilonManager,
    choose_m2,
    epsilon_bound,
    partial_sum_total,
)
from cyclebound.pipeline.bound_iteration import (
    DEFAULT_K_START,
    SW_CONSTANT,
    BoundIteration,
    BoundReport,
    Verdict,
    denominator_bound,
    iterate_bounds,
    sw_log_upper_bound,
    sw_upper_bound,
)
from cyclebound.pipeline.table import (
    DEFAULT_TABLE_M_VALUES,
    BoundTable,
    ComputerCertificate,
    TableRow,
    all_m_row,
    generate_table,
)
from cyclebound.pipeline.threshold import ThresholdMode, ThresholdResult, x0_threshold
from cyclebound.pipeline.cycle_identity import cycle_product_identity, product_mean_bound_holds

__all__ = [
    "ANALYTIC_X0_FLOOR",
    "DEFAULT_MAX_ROUNDS",
    "VERIFIED_X0",
    "GlobalConfig",
    "TConstantMode",
    "EpsilonBound",
    "EpsilonManager",
    "choose_m2",
    "epsilon_bound",
    "partial_sum_total",
    "DEFAULT_K_START",
    "SW_CONSTANT",
    "BoundIteration",
    "BoundReport",
    "Verdict",
    "denominator_bound",
    "iterate_bounds",
    "sw_log_upper_bound",
    "sw_upper_bound",
    "DEFAULT_TABLE_M_VALUES",
    "BoundTable",
    "ComputerCertificate",
    "TableRow",
    "all_m_row",
    "generate_table",
    "ThresholdMode",
    "ThresholdResult",
    "x0_threshold",
    "cycle_product_identity",
    "product_mean_bound_holds",
]
