from cyclebound.case_engine.search_config import (
    SYMBOLIC_X0_FLOOR,
    SearchConfig,
    SearchMode,
    X0Mode,
)
from cyclebound.case_engine.case_state import (
    TAIL_COEFFICIENT,
    AffineForm,
    CaseState,
    FloorConstraint,
    MinimumForm,
    exact_k_coefficient,
    root_state,
    tail_pair_coefficient,
)
from cyclebound.case_engine.branching import branch, can_branch
from cyclebound.case_engine.closing import ClosingWindow, find_closing_window, try_close
from cyclebound.case_engine.checkpoint import CheckpointData, checkpoint_load, checkpoint_save
from cyclebound.case_engine.search import ClosedCase, SearchOutcome, prove_average_bound
from cyclebound.case_engine.audit import AuditReport, audit_closed_case

__all__ = [
    "SYMBOLIC_X0_FLOOR",
    "SearchConfig",
    "SearchMode",
    "X0Mode",
    "TAIL_COEFFICIENT",
    "AffineForm",
    "CaseState",
    "FloorConstraint",
    "MinimumForm",
    "exact_k_coefficient",
    "root_state",
    "tail_pair_coefficient",
    "branch",
    "can_branch",
    "ClosingWindow",
    "find_closing_window",
    "try_close",
    "CheckpointData",
    "checkpoint_load",
    "checkpoint_save",
    "ClosedCase",
    "SearchOutcome",
    "prove_average_bound",
    "AuditReport",
    "audit_closed_case",
]
