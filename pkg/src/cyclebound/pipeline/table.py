"""Lower bounds on K for a list of maximal m values."""

import logging
import multiprocessing
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import pandas as pd

from cyclebound.case_engine.search import SearchOutcome
from cyclebound.case_engine.search_config import SearchConfig, SearchMode
from cyclebound.numerics.precision import run_with_precision_retry
from cyclebound.numerics.rational import format_scientific
from cyclebound.pipeline.bound_iteration import BoundIteration, Verdict, denominator_bound
from cyclebound.pipeline.epsilon_manager import EpsilonManager
from cyclebound.pipeline.global_config import GlobalConfig, TConstantMode

logger = logging.getLogger(__name__)

DEFAULT_TABLE_M_VALUES = (
    98,
    117,
    369,
    4366,
    17096,
    802380,
    1_070_000,
    1_890_000_000,
    2_180_000_000,
    13_400_000_000,
)


@dataclass(frozen=True)
class TableRow:
    """One line of the table: every m-cycle with m <= ``m`` has K >= ``K_bound``.

    Attributes
    ----------
    m : int, optional
        The largest m covered; None for the row valid for every m.
    K_bound : int
        The lower bound on the odd members.
    verdict : Verdict
        Final verdict of the iteration behind the row.
    rounds : int
        Rounds of that iteration.
    epsilon_upper : str
        The last epsilon, rounded up.
    mode : str
        The T-constant mode used.
    precision_bits : int
        Highest precision any round needed.
    """
    m: Optional[int]
    K_bound: int  # pylint: disable=invalid-name
    verdict: Verdict
    rounds: int
    epsilon_upper: str
    mode: str
    precision_bits: int

    def to_dict(self) -> dict:
        return {
            "m": "all" if self.m is None else str(self.m),
            "K_bound": str(self.K_bound),
            "verdict": self.verdict.value,
            "rounds": str(self.rounds),
            "epsilon_upper": self.epsilon_upper,
            "mode": self.mode,
            "precision_bits": str(self.precision_bits),
        }


@dataclass(frozen=True)
class BoundTable:
    """Rows in the order requested, followed by the row valid for every m."""
    rows: Tuple[TableRow, ...]
    config: GlobalConfig

    def to_dataframe(self) -> pd.DataFrame:
        columns = ["m", "K_bound", "verdict", "rounds", "epsilon_upper", "mode", "precision_bits"]
        return pd.DataFrame([row.to_dict() for row in self.rows], columns=columns)


@dataclass(frozen=True)
class ComputerCertificate:
    """A finished case search that stands in for ``trust_computer_bound``.

    computer1 rows assume every window of consecutive minima averages T
    at most 1 / X0. A proven unweighted search with target at most 1 at
    the table's own concrete X0 establishes exactly that.

    Attributes
    ----------
    outcome : SearchOutcome
        Result of :func:`cyclebound.case_engine.prove_average_bound`.
    search_config : SearchConfig
        The config the search ran with; its hash must match the outcome.
    """
    outcome: SearchOutcome
    search_config: SearchConfig

    def check(self, x0: int) -> None:
        """Raise ValueError unless the search proves the computer1 average at ``x0``."""
        config = self.search_config
        if self.outcome.config_hash != config.config_hash():
            raise ValueError("certificate outcome does not belong to its search config")
        if not self.outcome.proven or self.outcome.budget_exhausted or self.outcome.witnesses:
            raise ValueError("certificate search is not proven")
        if config.mode is not SearchMode.UNWEIGHTED or config.target_coef > 1:
            raise ValueError(
                f"certificate proves {config.mode.value} {config.target_coef}, "
                "computer1 needs unweighted with target at most 1"
            )
        if config.x0_mode.is_symbolic or config.x0_mode.value != x0:
            raise ValueError(f"certificate X0 {config.x0_mode} does not match the table X0 {x0}")


def all_m_row(config: GlobalConfig) -> TableRow:
    """The bound from the weighted average T of 3/4 per odd step.

    Its epsilon does not depend on m or K, so a single round suffices.
    """
    weighted = replace(config, t_constant_mode=TConstantMode.WEIGHTED_3_4)
    manager = EpsilonManager(weighted)

    def compute(bits: int):
        epsilon = manager.weighted_bound(1, 1, bits)
        return epsilon, denominator_bound(epsilon.hi, bits)[0]

    (epsilon, K), bits = run_with_precision_retry(  # pylint: disable=invalid-name
        compute, config.precision_bits, config.precision_ceiling
    )
    logger.info("every cycle has K >= %d", K)
    return TableRow(
        m=None,
        K_bound=K,
        verdict=Verdict.FIXED_POINT,
        rounds=1,
        epsilon_upper=format_scientific(epsilon.hi, 6, "up"),
        mode=TConstantMode.WEIGHTED_3_4.value,
        precision_bits=bits
    )


def _table_row(job: Tuple[int, int, GlobalConfig]) -> TableRow:
    m, K_start, config = job  # pylint: disable=invalid-name
    iteration = BoundIteration(m, K_start, config)
    reports = iteration.run()
    return TableRow(
        m=m,
        K_bound=iteration.final_bound,
        verdict=iteration.verdict,
        rounds=len(reports),
        epsilon_upper=format_scientific(reports[-1].epsilon.hi, 6, "up"),
        mode=config.t_constant_mode.value,
        precision_bits=max(report.precision_bits for report in reports)
    )


def generate_table(
    m_values: Sequence[int] = DEFAULT_TABLE_M_VALUES,
    config: Optional[GlobalConfig] = None,
    K_start: Optional[int] = None,  # pylint: disable=invalid-name
    workers: int = 1,
    certificate: Optional[ComputerCertificate] = None
) -> BoundTable:
    """Iterate the bound for each m and collect the final values.

    Parameters
    ----------
    m_values : Sequence[int]
        Largest m of each row.
    config : GlobalConfig, optional
        Defaults to ``GlobalConfig()``.
    K_start : int, optional
        Starting bound of every row. The bound valid for every m is always
        known, so the larger of the two is used.
    workers : int
        Rows are computed on a process pool when above 1.
    certificate : ComputerCertificate, optional
        Enables computer1 rows without ``trust_computer_bound``.

    Returns
    -------
    BoundTable
        The requested rows in order, then the row valid for every m.

    Raises
    ------
    ValueError
        If a row needs the computer1 bound without ``trust_computer_bound``
        or a valid certificate, or an m value is not positive.
    """
    config = config or GlobalConfig()
    if config.t_constant_mode is TConstantMode.COMPUTER_1 and not config.trust_computer_bound:
        if certificate is None:
            raise ValueError(
                "computer1 rows rest on an external computer search; "
                "set trust_computer_bound or pass a certificate to use them"
            )
        certificate.check(config.x0)
        logger.info("computer1 rows certified by search %s", certificate.outcome.config_hash[:12])
    for m in m_values:
        if m < 1:
            raise ValueError(f"m values must be positive, got {m}")
    if workers < 1:
        raise ValueError(f"workers must be positive, got {workers}")

    every_m = all_m_row(config)
    start = max(every_m.K_bound, K_start or 0)
    jobs = [(int(m), start, config) for m in m_values]
    if workers == 1:
        rows: List[TableRow] = [_table_row(job) for job in jobs]
    else:
        with multiprocessing.Pool(processes=workers) as pool:
            rows = pool.map(_table_row, jobs)
    for row in rows:
        logger.info("m <= %d: K >= %d (%s)", row.m, row.K_bound, row.verdict.value)
    return BoundTable(rows=tuple(rows) + (every_m,), config=config)
