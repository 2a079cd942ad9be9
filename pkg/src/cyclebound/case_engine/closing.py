"""Decide whether a case already proves the average T bound."""

from dataclasses import dataclass
from typing import List, Optional, Sequence

from gmpy2 import mpq

from cyclebound.case_engine.branching import can_branch
from cyclebound.case_engine.case_state import (
    TAIL_COEFFICIENT,
    AffineForm,
    CaseState,
    FloorConstraint,
    tail_pair_coefficient,
)
from cyclebound.case_engine.search_config import (
    SYMBOLIC_X0_FLOOR,
    SearchConfig,
    SearchMode,
    X0Mode,
)
from cyclebound.numerics.tristate import TriState


@dataclass(frozen=True)
class ClosingWindow:
    """Which window closed a case.

    Attributes
    ----------
    length : int
        Minima in the closing window. For a tail case this is the window
        used when two or more halvings follow the tail run.
    single_halving_length : int, optional
        Tail cases only: minima in the window used when exactly one
        halving follows the tail run.
    """
    length: int
    single_halving_length: Optional[int] = None


@dataclass(frozen=True)
class _Term:
    form: AffineForm
    coef: mpq
    weight: int
    minima: int = 1


def _lower_bound(form: AffineForm, constraints: Sequence[FloorConstraint], x0_mode: X0Mode) -> Optional[mpq]:
    """Lower bound on form(a) in units of X0; None when nothing positive is known.

    Symbolic: each constraint gives form >= (A/A_c) c X0 + kappa, and a
    negative kappa is charged against X0 >= 766.
    Concrete: the form is evaluated at the least admissible a.
    """
    if x0_mode.is_symbolic:
        best = None
        for constraint in constraints:
            ratio = mpq(form.A, constraint.form.A)
            kappa = ratio * (constraint.offset - constraint.form.B) + form.B
            rho = ratio * constraint.x0_multiple + min(mpq(0), kappa) / SYMBOLIC_X0_FLOOR
            if best is None or rho > best:
                best = rho
        return best if best is not None and best > 0 else None

    x0 = x0_mode.value
    a_floor = max([0] + [constraint.a_floor(x0) for constraint in constraints])
    smallest = form(a_floor)
    return mpq(smallest, x0) if smallest > 0 else None


def _shortest_closing_prefix(
    terms: Sequence[_Term],
    constraints: Sequence[FloorConstraint],
    config: SearchConfig
) -> Optional[int]:
    """Minima in the shortest prefix window meeting the target, if any."""
    total = mpq(0)
    weight = 0
    minima = 0
    for term in terms:
        if minima + term.minima > config.max_depth:
            break
        bound = _lower_bound(term.form, constraints, config.x0_mode)
        if bound is None:
            return None
        total += term.coef / bound
        minima += term.minima
        weight += term.weight if config.mode is SearchMode.WEIGHTED else term.minima
        if total <= config.target_coef * weight:
            return minima
    return None


def _terms(state: CaseState, config: SearchConfig) -> List[_Term]:
    terms = [_Term(record.form, record.coef, record.k) for record in state.affine_forms]
    if state.pending_form is not None:
        terms.append(_Term(state.pending_form, TAIL_COEFFICIENT, 1))
    return terms


def find_closing_window(state: CaseState, config: SearchConfig) -> Optional[ClosingWindow]:
    """The closing window of ``state``, or None if no window closes.

    A window is a run of consecutive minima starting at n1. It closes when
    the sum of coef_j / n_j, bounded through the constraints, is at most
    target_coef / X0 times the window weight (minima count, or odd steps
    in weighted mode).

    A tail record (k > k_cap) must close both when two or more halvings
    follow, using the merger bound n >= 2 X0 + 3, and when exactly one
    follows, where the tail minimum and its successor may be bounded
    together.
    """
    terms = _terms(state, config)
    records = state.affine_forms
    if not records or records[-1].k_exact:
        length = _shortest_closing_prefix(terms, state.constraints, config)
        return None if length is None else ClosingWindow(length)

    tail = records[-1]
    merger = state.constraints + (FloorConstraint(tail.form, 2, 3),)
    several = _shortest_closing_prefix(terms, merger, config)
    if several is None:
        return None

    single = _shortest_closing_prefix(terms, state.constraints, config)
    paired = _shortest_closing_prefix(
        terms[:-1] + [_Term(tail.form, tail_pair_coefficient(config.k_cap), tail.k + 1, minima=2)],
        state.constraints,
        config
    )
    candidates = [length for length in (single, paired) if length is not None]
    if not candidates:
        return None
    return ClosingWindow(several, single_halving_length=min(candidates))


def try_close(state: CaseState, config: SearchConfig) -> TriState:
    """Classify a case.

    Returns
    -------
    TriState
        ``TRUE`` if some window closes the case, ``FALSE`` if none does and
        the case cannot be refined further, ``UNKNOWN`` if branching deeper
        may still close it.
    """
    if find_closing_window(state, config) is not None:
        return TriState.TRUE
    if can_branch(state, config):
        return TriState.UNKNOWN
    return TriState.FALSE
