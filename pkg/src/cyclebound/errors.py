"""Exceptions raised by cyclebound."""

from typing import List, Optional


class CycleboundError(Exception):
    """Base class for all cyclebound errors."""


class InsufficientPrecisionError(CycleboundError, ArithmeticError):
    """An interval decision was UNKNOWN where a definite answer is required.

    Raising precision and retrying is expected to resolve it.
    """


class PrecisionExhaustedError(InsufficientPrecisionError):
    """The automatic precision retry reached its ceiling.

    Parameters
    ----------
    message : str
        Description of the undecided comparison.
    precision_bits : int
        The last precision tried.
    """
    def __init__(self, message: str, precision_bits: int):
        super().__init__(message)
        self.precision_bits = precision_bits


class CheckpointError(CycleboundError, ValueError):
    """A checkpoint file is malformed, truncated or belongs to another config.

    Parameters
    ----------
    message : str
        Description of the problem.
    records : list, optional
        The records that were decoded before the problem was found.

    Attributes
    ----------
    records : list
        The intact prefix of the checkpoint.
    """
    def __init__(self, message: str, records: Optional[List] = None):
        super().__init__(message)
        self.records = list(records) if records is not None else []
