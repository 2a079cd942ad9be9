"""Check closed cases against concrete trajectories."""

import random
from dataclasses import dataclass, field
from typing import List, Optional

from gmpy2 import mpq

from cyclebound.case_engine.search import ClosedCase
from cyclebound.case_engine.search_config import SearchConfig, SearchMode
from cyclebound.collatz.trajectory_profile import profile


@dataclass
class AuditReport:
    """Outcome of sampling one closed case.

    Attributes
    ----------
    samples : int
        Concrete starts checked.
    skipped : int
        Starts outside the case's constraints for the tail sub-case they
        landed in.
    failures : list[str]
        Descriptions of every mismatch found.
    """
    samples: int = 0
    skipped: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """No sampled start contradicted the case."""
        return not self.failures


def audit_closed_case(
    closed: ClosedCase,
    config: SearchConfig,
    x0: int,
    samples: int = 100,
    rng: Optional[random.Random] = None,
    spread: int = 1 << 20
) -> AuditReport:
    """Sample starts in a closed class and check the proven inequality.

    For each sampled a >= a_floor(x0) the trajectory of
    n1 = 2**e * a + r is profiled and compared against the stored affine
    forms and run shapes. Then the exact T-sum over the closing window
    must not exceed target_coef / x0 times the window weight.

    Parameters
    ----------
    closed : ClosedCase
        The case and its closing window.
    config : SearchConfig
        The config the case was closed under.
    x0 : int
        Concrete X0 used for the floors. Must equal the config's X0 in
        concrete mode.
    samples : int
        Number of starts to draw.
    rng : random.Random, optional
        Source of randomness.
    spread : int
        Starts are drawn from a in [a_floor, a_floor + spread).

    Returns
    -------
    AuditReport
        Every mismatch is listed; an empty list means the case passed.
    """
    if not config.x0_mode.is_symbolic and config.x0_mode.value != x0:
        raise ValueError(
            f"concrete search used X0={config.x0_mode.value}, audit asked for {x0}"
        )
    rng = rng or random.Random(0)
    state, window = closed.state, closed.window
    records = state.affine_forms
    a_floor = state.a_floor(x0)
    report = AuditReport()

    for _ in range(samples):
        a = a_floor + rng.randrange(spread)
        n1 = state.root_form(a)
        needed = max(window.length, window.single_halving_length or 0, len(records)) + 1
        minima = profile(n1, needed).minima
        if len(minima) < needed:
            report.skipped += 1
            continue
        report.samples += 1

        for index, record in enumerate(records):
            actual = minima[index]
            if actual.n != record.form(a):
                report.failures.append(f"a={a}: minimum {index + 1} is {actual.n}, form gives {record.form(a)}")
            if (record.k_exact and actual.k != record.k) or actual.k < record.k:
                report.failures.append(f"a={a}: minimum {index + 1} has k={actual.k}, case says {record.k}")
            if (record.ell_exact and actual.ell != record.ell) or actual.ell < record.ell:
                report.failures.append(f"a={a}: minimum {index + 1} has ell={actual.ell}, case says {record.ell}")
        if state.pending_form is not None and len(minima) > len(records):
            if minima[len(records)].n != state.pending_form(a):
                report.failures.append(f"a={a}: pending minimum is {minima[len(records)].n}")

        length = window.length
        if records and not records[-1].k_exact:
            tail = records[-1]
            tail_n = tail.form(a)
            if minima[len(records) - 1].ell == 1:
                length = window.single_halving_length
            elif tail_n < 2 * x0 + 3:
                # the merger bound only holds inside a cycle
                report.skipped += 1
                continue

        window_minima = minima[:length]
        total = sum((record.t_value for record in window_minima), mpq(0))
        if config.mode is SearchMode.WEIGHTED:
            weight = sum(record.k for record in window_minima)
        else:
            weight = len(window_minima)
        if total * x0 > config.target_coef * weight:
            report.failures.append(
                f"a={a}: window of {length} minima has T-sum {float(total)} above the target"
            )
    return report
