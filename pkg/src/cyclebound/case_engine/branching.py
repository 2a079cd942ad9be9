"""Split a case into the sub-cases of the next odd run or halving run."""

from dataclasses import dataclass, replace
from typing import List, Optional

from cyclebound.case_engine.case_state import (
    AffineForm,
    CaseState,
    FloorConstraint,
    MinimumForm,
)
from cyclebound.case_engine.search_config import SearchConfig


@dataclass
class _ParityPath:
    """A value form followed through forced parities.

    Whenever the parity of the value depends on a, a is split as
    a = 2a' + p and the substitution is accumulated in (shift, offset),
    meaning a_parent = 2**shift * a_new + offset.
    """
    value: AffineForm
    shift: int = 0
    offset: int = 0

    def copy(self) -> "_ParityPath":
        return _ParityPath(self.value, self.shift, self.offset)

    def force(self, bit: int) -> bool:
        """Restrict to the a where value has parity ``bit``; False if none."""
        A, B = self.value.A, self.value.B  # pylint: disable=invalid-name
        if A % 2 == 0:
            return B % 2 == bit
        parity = (bit - B) % 2
        self.value = AffineForm(2 * A, B + parity * A)
        self.offset += parity << self.shift
        self.shift += 1
        return True

    def odd_step(self) -> None:
        self.value = AffineForm(3 * self.value.A // 2, (3 * self.value.B + 1) // 2)

    def halve(self) -> None:
        self.value = AffineForm(self.value.A // 2, self.value.B // 2)


def can_branch(state: CaseState, config: SearchConfig) -> bool:
    """True when branching can still refine ``state``."""
    if state.open_even_form is not None:
        return True
    return state.pending_form is not None and state.min_count < config.max_depth


def _child(
    state: CaseState,
    path: _ParityPath,
    record: MinimumForm,
    pending: Optional[AffineForm] = None,
    open_even: Optional[AffineForm] = None,
    new_constraints: tuple = (),
    replace_last: bool = False
) -> CaseState:
    base = state.substitute(path.shift, path.offset)
    record = record.substitute(path.shift, path.offset)
    records = base.affine_forms[:-1] if replace_last else base.affine_forms
    return replace(
        base,
        affine_forms=records + (record,),
        pending_form=pending,
        open_even_form=open_even,
        constraints=base.constraints + tuple(new_constraints)
    )


def _branch_odd_run(state: CaseState, config: SearchConfig) -> List[CaseState]:
    """Children for the odd-run length k of the pending minimum.

    Order: k = 1 .. k_cap with one halving before two or more, then the
    tail k > k_cap.
    """
    minimum = state.pending_form
    children = []
    path = _ParityPath(minimum)
    for k in range(1, config.k_cap + 1):
        if not path.force(1):
            return children
        path.odd_step()

        even = path.copy()
        if not even.force(0):
            continue
        even.halve()

        single = even.copy()
        if single.force(1):
            children.append(_child(
                state, single,
                MinimumForm(minimum, k=k, ell=1),
                pending=single.value,
                new_constraints=(FloorConstraint(single.value, 1, 1),)
            ))

        double = even.copy()
        if double.force(0):
            double.halve()
            merged = minimum.substitute(double.shift, double.offset)
            children.append(_child(
                state, double,
                MinimumForm(minimum, k=k, ell=2, ell_exact=False),
                open_even=double.value,
                new_constraints=(
                    FloorConstraint(merged, 2, 3),
                    FloorConstraint(double.value, 1, 1),
                )
            ))

    if path.force(1):
        children.append(_child(
            state, path,
            MinimumForm(minimum, k=config.k_cap + 1, ell=1, k_exact=False, ell_exact=False)
        ))
    return children


def _branch_even_run(state: CaseState, config: SearchConfig) -> List[CaseState]:
    """Children deciding whether the open halving run stops here."""
    last = state.affine_forms[-1]
    children = []
    path = _ParityPath(state.open_even_form)

    stop = path.copy()
    if stop.force(1):
        children.append(_child(
            state, stop,
            replace(last, ell_exact=True),
            pending=stop.value,
            replace_last=True
        ))

    more = path.copy()
    if more.force(0):
        more.halve()
        ell = last.ell + 1
        children.append(_child(
            state, more,
            replace(last, ell=ell),
            open_even=more.value if ell < config.ell_cap else None,
            new_constraints=(FloorConstraint(more.value, 1, 1),),
            replace_last=True
        ))
    return children


def branch(state: CaseState, config: SearchConfig) -> List[CaseState]:
    """Partition the admissible set of ``state`` into refined sub-cases.

    An unfinished halving run is resolved first; otherwise the odd run of
    the pending minimum is split by its length k and by whether one or
    more halvings follow. Every step whose parity depends on a splits a by
    parity, doubling the modulus of the root class.

    Parameters
    ----------
    state : CaseState
        A node with a pending minimum or an open halving run.
    config : SearchConfig
        Supplies ``k_cap`` and ``ell_cap``.

    Returns
    -------
    list[CaseState]
        Children whose classes are disjoint and cover the parent's class.

    Raises
    ------
    ValueError
        If ``state`` has nothing to branch on.
    """
    if state.open_even_form is not None:
        return _branch_even_run(state, config)
    if state.pending_form is None:
        raise ValueError(f"nothing to branch on in {state.describe()}")
    return _branch_odd_run(state, config)
