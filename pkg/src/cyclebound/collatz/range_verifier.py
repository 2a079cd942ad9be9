"""Verify that every start value up to a limit falls below itself.

Descent below the start suffices by induction: if every n <= limit reaches
a smaller value, every n <= limit reaches the trivial cycle.
"""

import logging
import multiprocessing
import os
import time
from dataclasses import dataclass
from typing import Iterable, List, Optional, Set, Tuple

import numpy as np

from cyclebound.errors import CheckpointError

logger = logging.getLogger(__name__)

DEFAULT_BLOCK_SIZE = 1 << 20
DEFAULT_MAX_STEPS = 100_000
_U64_MAX = np.iinfo(np.uint64).max
# (3v+1)/2 must stay inside int64 for every lane.
_LANE_LIMIT = (int(np.iinfo(np.int64).max) - 1) // 3


@dataclass(frozen=True)
class BlockResult:
    """Outcome for the half-open block [start, end).

    Attributes
    ----------
    start : int
        First value in the block.
    end : int
        One past the last value in the block.
    verified : bool
        Every value in the block fell below itself.
    max_excursion : int
        Largest trajectory value seen in the block.
    first_failure : int, optional
        Smallest start that hit the step cap, if any.
    """
    start: int
    end: int
    verified: bool
    max_excursion: int
    first_failure: Optional[int] = None


@dataclass(frozen=True)
class RangeVerifierReport:
    """Result of :func:`verify_range`.

    Attributes
    ----------
    limit : int
        Every n <= limit was checked.
    verified : bool
        Every n <= limit reaches a value below n.
    max_excursion : int
        Largest trajectory value seen.
    elapsed_seconds : float
        Wall-clock time of this call.
    blocks_completed : int
        Blocks finished, including blocks restored from a checkpoint.
    first_failure : int, optional
        Smallest unverified start, if any.
    """
    limit: int
    verified: bool
    max_excursion: int
    elapsed_seconds: float
    blocks_completed: int = 0
    first_failure: Optional[int] = None


def _descend_scalar(start: int, value: int, steps: int, max_steps: int) -> Tuple[bool, int]:
    """Finish one trajectory with Python integers; returns (descended, peak)."""
    peak = value
    while value >= start:
        if steps >= max_steps:
            return False, peak
        value = (3 * value + 1) >> 1 if value & 1 else value >> 1
        peak = max(peak, value)
        steps += 1
    return True, peak


def _trivial_peak(start: int, end: int) -> int:
    """Peak over the starts in [start, end) that are not 3 mod 4.

    Even n drops at once. n = 1 mod 4 peaks at (3n+1)/2 before dropping.
    """
    peak = end - 1
    last = end - 1 - ((end - 1 - 1) % 4)
    if last >= max(start, 1):
        peak = max(peak, (3 * last + 1) // 2)
    return peak


def verify_block(start: int, end: int, max_steps: int = DEFAULT_MAX_STEPS) -> BlockResult:
    """Check every n in [start, end).

    Only starts congruent to 3 mod 4 are iterated. They are advanced
    together as int64 lanes; a lane about to overflow is finished with
    Python integers.

    Parameters
    ----------
    start : int
        First value, at least 1.
    end : int
        One past the last value.
    max_steps : int
        Step cap per start; starts hitting it are reported as failures.

    Returns
    -------
    BlockResult
        The verdict and excursion for the block.
    """
    if start < 1 or end <= start:
        raise ValueError(f"invalid block [{start}, {end})")
    peak = _trivial_peak(start, end)
    first = start + (3 - start) % 4
    origin = np.arange(first, end, 4, dtype=np.int64)
    values = origin.copy()
    failures: List[int] = []
    steps = 0

    while values.size:
        wide = values > _LANE_LIMIT
        if wide.any():
            for lane_start, lane_value in zip(origin[wide].tolist(), values[wide].tolist()):
                descended, lane_peak = _descend_scalar(lane_start, lane_value, steps, max_steps)
                peak = max(peak, lane_peak)
                if not descended:
                    failures.append(lane_start)
            keep = ~wide
            values, origin = values[keep], origin[keep]
            if not values.size:
                break
        if steps >= max_steps:
            failures.extend(origin.tolist())
            break
        odd = (values & 1).astype(bool)
        values = np.where(odd, (3 * values + 1) >> 1, values >> 1)
        peak = max(peak, int(values.max()))
        steps += 1
        keep = values >= origin
        values, origin = values[keep], origin[keep]

    first_failure = min(failures) if failures else None
    return BlockResult(
        start=start,
        end=end,
        verified=first_failure is None,
        max_excursion=peak,
        first_failure=first_failure
    )


def _verify_block_star(bounds: Tuple[int, int, int]) -> BlockResult:
    return verify_block(*bounds)


def read_checkpoint(path: str) -> List[Tuple[int, int, int]]:
    """Read completed block records.

    A torn trailing record is dropped with a warning.

    Returns
    -------
    list[tuple[int, int, int]]
        ``(block_start, block_end, max_excursion)`` triples in file order.
    """
    if not os.path.exists(path):
        return []
    words = np.fromfile(path, dtype="<u8")
    usable = (words.size // 3) * 3
    if usable != words.size:
        logger.warning(
            "ignoring torn trailing record in %s (%d stray words)",
            path, words.size - usable
        )
    return [tuple(int(word) for word in row) for row in words[:usable].reshape(-1, 3)]


def append_checkpoint(path: str, result: BlockResult) -> None:
    """Append one completed block as three little-endian u64 words."""
    excursion = result.max_excursion
    if excursion > _U64_MAX:
        logger.warning("max_excursion %d clamped to u64 in checkpoint", excursion)
        excursion = int(_U64_MAX)
    if result.end > _U64_MAX:
        raise CheckpointError(f"block end {result.end} does not fit a u64 record")
    with open(path, "ab") as handle:
        np.array([result.start, result.end, excursion], dtype="<u8").tofile(handle)


def _blocks(limit: int, block_size: int) -> Iterable[Tuple[int, int]]:
    for block_start in range(1, limit + 1, block_size):
        yield block_start, min(block_start + block_size, limit + 1)


def verify_range(
    limit: int,
    worker_count: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
    checkpoint_path: Optional[str] = None,
    max_steps: int = DEFAULT_MAX_STEPS
) -> RangeVerifierReport:
    """Check that every n <= limit falls below itself.

    n = 1 lies on the trivial cycle and counts as verified.

    Parameters
    ----------
    limit : int
        Largest start to check, at least 2.
    worker_count : int
        Number of worker processes; 1 runs in-process.
    block_size : int
        Starts per block.
    checkpoint_path : str, optional
        Append-only record of completed blocks; completed blocks are skipped
        when the file already exists.
    max_steps : int
        Step cap per start.

    Returns
    -------
    RangeVerifierReport
        The aggregated verdict.

    Raises
    ------
    ValueError
        If ``limit`` < 2, ``worker_count`` < 1 or ``block_size`` < 1.
    """
    if limit < 2:
        raise ValueError(f"limit must be at least 2, got {limit}")
    if worker_count < 1:
        raise ValueError(f"worker_count must be positive, got {worker_count}")
    if block_size < 1:
        raise ValueError(f"block_size must be positive, got {block_size}")

    began = time.perf_counter()
    peak = 2
    completed = 0
    done: Set[Tuple[int, int]] = set()
    if checkpoint_path is not None:
        for block_start, block_end, excursion in read_checkpoint(checkpoint_path):
            done.add((block_start, block_end))
            peak = max(peak, excursion)
        completed = len(done)
        if done:
            logger.info("resuming with %d completed blocks", completed)

    pending = [
        (block_start, block_end, max_steps)
        for block_start, block_end in _blocks(limit, block_size)
        if (block_start, block_end) not in done
    ]
    failures: List[int] = []

    def _collect(result: BlockResult) -> None:
        nonlocal peak, completed
        peak = max(peak, result.max_excursion)
        if result.verified:
            completed += 1
            if checkpoint_path is not None:
                append_checkpoint(checkpoint_path, result)
        else:
            failures.append(result.first_failure)
            logger.warning(
                "block [%d, %d) has an unverified start %d",
                result.start, result.end, result.first_failure
            )
        logger.debug("block [%d, %d) done", result.start, result.end)

    if worker_count == 1:
        for bounds in pending:
            _collect(_verify_block_star(bounds))
    else:
        with multiprocessing.Pool(processes=worker_count) as pool:
            for result in pool.imap_unordered(_verify_block_star, pending):
                _collect(result)

    return RangeVerifierReport(
        limit=limit,
        verified=not failures,
        max_excursion=peak,
        elapsed_seconds=time.perf_counter() - began,
        blocks_completed=completed,
        first_failure=min(failures) if failures else None
    )
