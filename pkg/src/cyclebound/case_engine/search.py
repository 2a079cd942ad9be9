"""Depth-first proof search over residue classes."""

import logging
import multiprocessing
import time
from collections import deque
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from cyclebound.case_engine.branching import branch, can_branch
from cyclebound.case_engine.case_state import CaseState, root_state
from cyclebound.case_engine.checkpoint import checkpoint_load, checkpoint_save
from cyclebound.case_engine.closing import ClosingWindow, find_closing_window
from cyclebound.case_engine.search_config import SearchConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClosedCase:
    """A closed leaf together with the window that closed it."""
    state: CaseState
    window: ClosingWindow


@dataclass(frozen=True)
class SearchOutcome:
    """Result of :func:`prove_average_bound`.

    Attributes
    ----------
    proven : bool
        Every case closed.
    nodes_explored : int
        Nodes classified.
    nodes_closed : int
        Leaves closed by a window.
    max_modulus_exp_reached : int
        Largest e of any node seen.
    witnesses : tuple[CaseState, ...]
        Open or unclosable nodes, sorted; empty when proven.
    elapsed_seconds : float
        Wall-clock time of this call.
    budget_exhausted : bool
        Some subtree hit the node budget.
    closed_cases : tuple[ClosedCase, ...]
        Closed leaves, only when requested.
    config_hash : str
        Hash of the search config.
    """
    proven: bool
    nodes_explored: int
    nodes_closed: int
    max_modulus_exp_reached: int
    witnesses: Tuple[CaseState, ...]
    elapsed_seconds: float
    budget_exhausted: bool = False
    closed_cases: Tuple[ClosedCase, ...] = ()
    config_hash: str = ""


@dataclass
class _Tally:
    nodes_explored: int = 0
    nodes_closed: int = 0
    max_modulus_exp: int = 0
    budget_exhausted: bool = False
    witnesses: List[CaseState] = field(default_factory=list)
    closed: List[ClosedCase] = field(default_factory=list)

    def merge(self, other: "_Tally") -> None:
        self.nodes_explored += other.nodes_explored
        self.nodes_closed += other.nodes_closed
        self.max_modulus_exp = max(self.max_modulus_exp, other.max_modulus_exp)
        self.budget_exhausted = self.budget_exhausted or other.budget_exhausted
        self.witnesses.extend(other.witnesses)
        self.closed.extend(other.closed)


def _visit(node: CaseState, config: SearchConfig, tally: _Tally, record_closed: bool) -> List[CaseState]:
    """Classify one node; return its children when it must be refined."""
    tally.nodes_explored += 1
    tally.max_modulus_exp = max(tally.max_modulus_exp, node.modulus_exp)
    if node.modulus_exp > config.modulus_exp_ceiling:
        logger.debug("modulus ceiling exceeded at %s", node.describe())
        tally.witnesses.append(node)
        return []
    window = find_closing_window(node, config)
    if window is not None:
        tally.nodes_closed += 1
        if record_closed:
            tally.closed.append(ClosedCase(node, window))
        return []
    if not can_branch(node, config):
        tally.witnesses.append(node)
        return []
    return branch(node, config)


def _explore_subtree(job: Tuple[int, CaseState, SearchConfig, bool]) -> Tuple[int, _Tally]:
    """Depth-first search below one frontier node, smallest k first."""
    index, subtree_root, config, record_closed = job
    tally = _Tally()
    stack = [subtree_root]
    while stack:
        if tally.nodes_explored >= config.node_budget:
            tally.budget_exhausted = True
            tally.witnesses.extend(reversed(stack))
            break
        node = stack.pop()
        stack.extend(reversed(_visit(node, config, tally, record_closed)))
    return index, tally


def _split_frontier(config: SearchConfig, tally: _Tally, record_closed: bool) -> List[CaseState]:
    """Breadth-first expansion of the root into about frontier_size subtrees."""
    queue = deque([root_state()])
    while queue and len(queue) < config.frontier_size:
        queue.extend(_visit(queue.popleft(), config, tally, record_closed))
    return list(queue)


def prove_average_bound(
    config: SearchConfig,
    workers: int = 1,
    checkpoint_path: Optional[str] = None,
    resume: bool = False,
    record_closed: bool = False
) -> SearchOutcome:
    """Search for a proof that every window average stays below the target.

    The root is first expanded breadth-first into a fixed frontier, then
    every frontier subtree is explored depth-first, in process or on a
    worker pool. The frontier does not depend on ``workers``, so the
    verdict and the witness list do not either.

    Parameters
    ----------
    config : SearchConfig
        What to prove.
    workers : int
        Worker processes; 1 explores in process.
    checkpoint_path : str, optional
        Where to save the remaining frontier after each finished subtree.
    resume : bool
        Continue from ``checkpoint_path`` instead of starting at the root.
    record_closed : bool
        Keep every closed leaf and its window in the outcome.

    Returns
    -------
    SearchOutcome
        ``proven`` is True only if every case closed.

    Raises
    ------
    ValueError
        If ``workers < 1`` or ``resume`` is set without a checkpoint path.
    CheckpointError
        If the checkpoint is unreadable or belongs to another config.
    """
    if workers < 1:
        raise ValueError(f"workers must be positive, got {workers}")
    if resume and checkpoint_path is None:
        raise ValueError("resume requires a checkpoint path")

    began = time.perf_counter()
    config_hash = config.config_hash()
    tally = _Tally()
    if resume:
        saved = checkpoint_load(checkpoint_path, expected_hash=config_hash)
        frontier = list(saved.frontier)
        tally.nodes_explored = saved.nodes_explored
        tally.nodes_closed = saved.nodes_closed
        tally.max_modulus_exp = saved.max_modulus_exp_reached
        tally.witnesses.extend(saved.witnesses)
        logger.info("resuming with %d open subtrees", len(frontier))
    else:
        frontier = _split_frontier(config, tally, record_closed)
        logger.info("root split into %d subtrees", len(frontier))
        if checkpoint_path is not None:
            _save(checkpoint_path, config_hash, frontier, tally)

    remaining = dict(enumerate(frontier))
    jobs = [(index, node, config, record_closed) for index, node in remaining.items()]

    def _collect(results) -> None:
        for index, subtree in results:
            tally.merge(subtree)
            del remaining[index]
            logger.info(
                "subtree %d done: %d nodes, %d open subtrees left",
                index, subtree.nodes_explored, len(remaining)
            )
            if checkpoint_path is not None:
                _save(checkpoint_path, config_hash, remaining.values(), tally)

    if workers == 1:
        _collect(_explore_subtree(job) for job in jobs)
    else:
        with multiprocessing.Pool(processes=workers) as pool:
            _collect(pool.imap_unordered(_explore_subtree, jobs))

    witnesses = tuple(sorted(tally.witnesses, key=CaseState.sort_key))
    closed = tuple(sorted(tally.closed, key=lambda case: case.state.sort_key()))
    outcome = SearchOutcome(
        proven=not witnesses,
        nodes_explored=tally.nodes_explored,
        nodes_closed=tally.nodes_closed,
        max_modulus_exp_reached=tally.max_modulus_exp,
        witnesses=witnesses,
        elapsed_seconds=time.perf_counter() - began,
        budget_exhausted=tally.budget_exhausted,
        closed_cases=closed,
        config_hash=config_hash
    )
    logger.info(
        "search %s after %d nodes (%d witnesses)",
        "proven" if outcome.proven else "unproven",
        outcome.nodes_explored, len(witnesses)
    )
    return outcome


def _save(path: str, config_hash: str, frontier: Sequence[CaseState], tally: _Tally) -> None:
    checkpoint_save(
        path,
        list(frontier),
        config_hash,
        witnesses=tally.witnesses,
        nodes_explored=tally.nodes_explored,
        nodes_closed=tally.nodes_closed,
        max_modulus_exp_reached=tally.max_modulus_exp
    )
