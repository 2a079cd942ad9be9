"""Versioned binary checkpoints of the case-search frontier.

Layout: the magic ``CBND``, a big-endian u16 format version and the
32-byte sha256 of the search config, followed by records. A record is a
kind byte, a varint payload length and the payload.

Inside a payload, nonnegative integers (residues and form slopes) are
minimal big-endian byte strings prefixed by a varint length. Form
intercepts and constraint offsets may be negative; they are zigzag-mapped
to nonnegative integers first and then stored the same way. Small counts
(modulus exponents, k, ell, flags) are plain varints.
"""

import logging
import os
import struct
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from cyclebound.case_engine.case_state import (
    AffineForm,
    CaseState,
    FloorConstraint,
    MinimumForm,
)
from cyclebound.errors import CheckpointError

logger = logging.getLogger(__name__)

MAGIC = b"CBND"
FORMAT_VERSION = 2
_HEADER = struct.Struct(">4sH32s")

RECORD_FRONTIER = 0
RECORD_WITNESS = 1
RECORD_STATS = 2


class _Truncated(Exception):
    pass


@dataclass(frozen=True)
class CheckpointData:
    """Contents of a checkpoint.

    Attributes
    ----------
    config_hash : str
        Hex sha256 of the search config that wrote it.
    frontier : tuple[CaseState, ...]
        Open nodes still to explore.
    witnesses : tuple[CaseState, ...]
        Unclosable nodes found so far.
    nodes_explored : int
        Nodes explored before the checkpoint.
    nodes_closed : int
        Nodes closed before the checkpoint.
    max_modulus_exp_reached : int
        Largest modulus exponent seen before the checkpoint.
    """
    config_hash: str
    frontier: Tuple[CaseState, ...] = ()
    witnesses: Tuple[CaseState, ...] = ()
    nodes_explored: int = 0
    nodes_closed: int = 0
    max_modulus_exp_reached: int = 0


class _Writer:
    def __init__(self):
        self.buffer = bytearray()

    def varint(self, value: int) -> None:
        if value < 0:
            raise ValueError(f"varint requires a nonnegative value, got {value}")
        while True:
            byte = value & 0x7F
            value >>= 7
            if value:
                self.buffer.append(byte | 0x80)
            else:
                self.buffer.append(byte)
                return

    def natural(self, value: int) -> None:
        if value < 0:
            raise ValueError(f"expected a nonnegative integer, got {value}")
        raw = int(value).to_bytes((value.bit_length() + 7) // 8, "big")
        self.varint(len(raw))
        self.buffer.extend(raw)

    def integer(self, value: int) -> None:
        self.natural(2 * value if value >= 0 else -2 * value - 1)

    def form(self, form: AffineForm) -> None:
        self.natural(form.A)
        self.integer(form.B)

    def optional_form(self, form: Optional[AffineForm]) -> None:
        self.varint(0 if form is None else 1)
        if form is not None:
            self.form(form)


class _Reader:
    def __init__(self, data: bytes, position: int = 0, end: Optional[int] = None):
        self.data = data
        self.position = position
        self.end = len(data) if end is None else end

    def byte(self) -> int:
        if self.position >= self.end:
            raise _Truncated()
        value = self.data[self.position]
        self.position += 1
        return value

    def varint(self) -> int:
        value = 0
        shift = 0
        while True:
            byte = self.byte()
            value |= (byte & 0x7F) << shift
            if not byte & 0x80:
                return value
            shift += 7

    def raw(self, length: int) -> bytes:
        if self.position + length > self.end:
            raise _Truncated()
        chunk = self.data[self.position:self.position + length]
        self.position += length
        return chunk

    def natural(self) -> int:
        return int.from_bytes(self.raw(self.varint()), "big")

    def integer(self) -> int:
        zigzag = self.natural()
        return zigzag // 2 if zigzag % 2 == 0 else -(zigzag + 1) // 2

    def form(self) -> AffineForm:
        return AffineForm(self.natural(), self.integer())

    def optional_form(self) -> Optional[AffineForm]:
        return self.form() if self.varint() else None


def encode_state(state: CaseState) -> bytes:
    """Serialize one CaseState payload."""
    writer = _Writer()
    writer.varint(state.modulus_exp)
    writer.natural(state.residue)
    writer.varint(len(state.affine_forms))
    for record in state.affine_forms:
        writer.form(record.form)
        writer.varint(record.k)
        writer.varint(record.ell)
        writer.varint(int(record.k_exact) | (int(record.ell_exact) << 1))
    writer.optional_form(state.pending_form)
    writer.optional_form(state.open_even_form)
    writer.varint(len(state.constraints))
    for constraint in state.constraints:
        writer.form(constraint.form)
        writer.integer(constraint.x0_multiple)
        writer.integer(constraint.offset)
    return bytes(writer.buffer)


def _decode_state(reader: _Reader) -> CaseState:
    modulus_exp = reader.varint()
    residue = reader.natural()
    records = []
    for _ in range(reader.varint()):
        form = reader.form()
        k, ell, flags = reader.varint(), reader.varint(), reader.varint()
        records.append(MinimumForm(form, k, ell, bool(flags & 1), bool(flags & 2)))
    pending = reader.optional_form()
    open_even = reader.optional_form()
    constraints = []
    for _ in range(reader.varint()):
        form = reader.form()
        constraints.append(FloorConstraint(form, reader.integer(), reader.integer()))
    return CaseState(
        modulus_exp=modulus_exp,
        residue=residue,
        affine_forms=tuple(records),
        pending_form=pending,
        open_even_form=open_even,
        constraints=tuple(constraints)
    )


def decode_state(payload: bytes) -> CaseState:
    """Inverse of :func:`encode_state`."""
    reader = _Reader(payload)
    try:
        state = _decode_state(reader)
    except _Truncated as exc:
        raise CheckpointError("truncated CaseState payload") from exc
    if reader.position != len(payload):
        raise CheckpointError("trailing bytes after CaseState payload")
    return state


def _record(kind: int, payload: bytes) -> bytes:
    writer = _Writer()
    writer.buffer.append(kind)
    writer.varint(len(payload))
    writer.buffer.extend(payload)
    return bytes(writer.buffer)


def checkpoint_save(
    path: str,
    frontier: Sequence[CaseState],
    config_hash: str,
    witnesses: Sequence[CaseState] = (),
    nodes_explored: int = 0,
    nodes_closed: int = 0,
    max_modulus_exp_reached: int = 0
) -> None:
    """Write the frontier atomically (temporary file, then rename).

    Parameters
    ----------
    path : str
        Destination file.
    frontier : Sequence[CaseState]
        Open nodes.
    config_hash : str
        Hex sha256 of the search config.
    witnesses : Sequence[CaseState]
        Unclosable nodes found so far.
    nodes_explored, nodes_closed, max_modulus_exp_reached : int
        Search counters to restore on resume.
    """
    digest = bytes.fromhex(config_hash)
    if len(digest) != 32:
        raise ValueError(f"config_hash must be a sha256 hex digest, got {config_hash!r}")
    chunks = [_HEADER.pack(MAGIC, FORMAT_VERSION, digest)]
    stats = _Writer()
    for value in (nodes_explored, nodes_closed, max_modulus_exp_reached):
        stats.varint(value)
    chunks.append(_record(RECORD_STATS, bytes(stats.buffer)))
    chunks.extend(_record(RECORD_FRONTIER, encode_state(state)) for state in frontier)
    chunks.extend(_record(RECORD_WITNESS, encode_state(state)) for state in witnesses)

    temporary = f"{path}.tmp"
    with open(temporary, "wb") as handle:
        handle.write(b"".join(chunks))
    os.replace(temporary, path)
    logger.info(
        "checkpoint written to %s: %d open, %d witnesses",
        path, len(frontier), len(witnesses)
    )


def checkpoint_load(path: str, expected_hash: Optional[str] = None) -> CheckpointData:
    """Read a checkpoint written by :func:`checkpoint_save`.

    Parameters
    ----------
    path : str
        Checkpoint file.
    expected_hash : str, optional
        Refuse the file unless it was written for this config hash.

    Returns
    -------
    CheckpointData
        The decoded frontier, witnesses and counters.

    Raises
    ------
    CheckpointError
        On a bad magic, an unsupported version, a config mismatch, an
        unknown record kind or a truncated record. ``records`` holds the
        states decoded before the problem.
    """
    with open(path, "rb") as handle:
        data = handle.read()
    if len(data) < _HEADER.size:
        raise CheckpointError(f"{path} is too short to be a checkpoint")
    magic, version, digest = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CheckpointError(f"{path} is not a cyclebound checkpoint (magic {magic!r})")
    if version != FORMAT_VERSION:
        raise CheckpointError(
            f"unsupported checkpoint format version {version}, expected {FORMAT_VERSION}"
        )
    config_hash = digest.hex()
    if expected_hash is not None and expected_hash != config_hash:
        raise CheckpointError(
            f"checkpoint config hash {config_hash} does not match {expected_hash}"
        )

    frontier: List[CaseState] = []
    witnesses: List[CaseState] = []
    decoded: List[CaseState] = []
    stats = (0, 0, 0)
    reader = _Reader(data, _HEADER.size)
    while reader.position < len(data):
        index = len(decoded)
        try:
            kind = reader.byte()
            length = reader.varint()
            payload_reader = _Reader(data, reader.position, reader.position + length)
            if reader.position + length > len(data):
                raise _Truncated()
            if kind == RECORD_STATS:
                stats = (
                    payload_reader.varint(),
                    payload_reader.varint(),
                    payload_reader.varint()
                )
            elif kind in (RECORD_FRONTIER, RECORD_WITNESS):
                state = _decode_state(payload_reader)
                decoded.append(state)
                (frontier if kind == RECORD_FRONTIER else witnesses).append(state)
            else:
                raise CheckpointError(f"unknown record kind {kind} at record {index}", decoded)
            reader.position += length
        except _Truncated as exc:
            raise CheckpointError(
                f"truncated record after {len(decoded)} intact records in {path}", decoded
            ) from exc

    return CheckpointData(
        config_hash=config_hash,
        frontier=tuple(frontier),
        witnesses=tuple(witnesses),
        nodes_explored=stats[0],
        nodes_closed=stats[1],
        max_modulus_exp_reached=stats[2]
    )
