"""Working precision defaults and the automatic retry loop."""

import logging
import os
from typing import Callable, Tuple, TypeVar

from cyclebound.errors import InsufficientPrecisionError, PrecisionExhaustedError
from cyclebound.numerics.tristate import TriState

logger = logging.getLogger(__name__)

T = TypeVar("T")

DEFAULT_PRECISION_BITS = 384
DEFAULT_PRECISION_CEILING = 8192
MIN_PRECISION_BITS = 16
PRECISION_ENV_VAR = "CYCLEBOUND_PRECISION_BITS"


def validate_precision(precision_bits: int) -> int:
    """Check a precision value and return it.

    Raises
    ------
    ValueError
        If ``precision_bits`` is not an integer of at least 16.
    """
    if isinstance(precision_bits, bool) or not isinstance(precision_bits, int):
        raise ValueError(
            f"precision_bits must be an integer, got {precision_bits!r}"
        )
    if precision_bits < MIN_PRECISION_BITS:
        raise ValueError(
            f"precision_bits must be at least {MIN_PRECISION_BITS}, "
            f"got {precision_bits}"
        )
    return precision_bits


def default_precision_bits() -> int:
    """Precision from ``CYCLEBOUND_PRECISION_BITS``, else 384 bits."""
    raw = os.environ.get(PRECISION_ENV_VAR)
    if raw is None or raw.strip() == "":
        return DEFAULT_PRECISION_BITS
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(
            f"{PRECISION_ENV_VAR} must be an integer, got {raw!r}"
        ) from exc
    return validate_precision(value)


def require(decision: TriState, question: str) -> bool:
    """Turn a conservative decision into a boolean.

    Parameters
    ----------
    decision : TriState
        The conservative answer.
    question : str
        Human readable description used in the error message.

    Returns
    -------
    bool
        ``True`` for ``TRUE`` and ``False`` for ``FALSE``.

    Raises
    ------
    InsufficientPrecisionError
        If ``decision`` is ``UNKNOWN``.
    """
    if decision is TriState.TRUE:
        return True
    if decision is TriState.FALSE:
        return False
    raise InsufficientPrecisionError(f"insufficient precision to decide {question}")


def run_with_precision_retry(
    func: Callable[[int], T],
    precision_bits: int,
    ceiling: int = DEFAULT_PRECISION_CEILING
) -> Tuple[T, int]:
    """Call ``func(bits)``, doubling ``bits`` on InsufficientPrecisionError.

    Parameters
    ----------
    func : Callable[[int], T]
        Computation parameterised by the working precision.
    precision_bits : int
        First precision to try.
    ceiling : int
        Largest precision to try.

    Returns
    -------
    tuple[T, int]
        The result and the precision at which it was decided.

    Raises
    ------
    PrecisionExhaustedError
        If the computation is still undecided at ``ceiling`` bits.
    """
    bits = validate_precision(precision_bits)
    ceiling = max(ceiling, bits)
    while True:
        try:
            return func(bits), bits
        except PrecisionExhaustedError:
            raise
        except InsufficientPrecisionError as exc:
            if bits >= ceiling:
                raise PrecisionExhaustedError(
                    f"{exc} (precision ceiling of {ceiling} bits reached)",
                    bits
                ) from exc
            next_bits = min(2 * bits, ceiling)
            logger.info("%s; retrying at %d bits", exc, next_bits)
            bits = next_bits
