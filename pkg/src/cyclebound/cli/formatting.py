"""Render command results as JSON, CSV or aligned text."""

import io
import json
from dataclasses import dataclass, field
from typing import Dict, Optional

import pandas as pd


@dataclass
class CommandResult:
    """Everything a subcommand reports.

    Attributes
    ----------
    header : dict[str, str]
        Reproducibility data: command, config hash, precision, mode.
    summary : dict[str, str]
        The headline values.
    rows : pandas.DataFrame, optional
        Per-round, per-row or per-minimum detail.
    exit_code : int
        0 on success, 2 when the claim was not established.
    elapsed_seconds : float
        Wall-clock time; reported apart from the deterministic body.
    notes : list[str]
        Extra lines for the text format only.
    """
    header: Dict[str, str]
    summary: Dict[str, str]
    rows: Optional[pd.DataFrame] = None
    exit_code: int = 0
    elapsed_seconds: float = 0.0
    notes: list = field(default_factory=list)


def _strings(frame: pd.DataFrame) -> list:
    return [
        {str(key): str(value) for key, value in record.items()}
        for record in frame.to_dict(orient="records")
    ]


def render_json(result: CommandResult) -> str:
    payload = {
        "header": result.header,
        "summary": result.summary,
        "rows": [] if result.rows is None else _strings(result.rows),
        "timing": {"elapsed_seconds": f"{result.elapsed_seconds:.3f}"},
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def render_csv(result: CommandResult) -> str:
    buffer = io.StringIO()
    for key, value in sorted(result.header.items()):
        buffer.write(f"# {key}: {value}\n")
    for key, value in sorted(result.summary.items()):
        buffer.write(f"# {key}: {value}\n")
    buffer.write(f"# elapsed_seconds: {result.elapsed_seconds:.3f}\n")
    rows = result.rows
    if rows is None:
        rows = pd.DataFrame([result.summary])
    rows.to_csv(buffer, index=False)
    return buffer.getvalue()


def render_text(result: CommandResult) -> str:
    lines = [f"{key}: {value}" for key, value in sorted(result.header.items())]
    lines.append("")
    width = max((len(key) for key in result.summary), default=0)
    lines.extend(f"{key.ljust(width)}  {value}" for key, value in result.summary.items())
    if result.rows is not None and not result.rows.empty:
        lines.append("")
        lines.append(result.rows.to_string(index=False))
    lines.extend(result.notes)
    lines.append(f"elapsed: {result.elapsed_seconds:.3f} s")
    return "\n".join(lines) + "\n"


_RENDERERS = {
    "json": render_json,
    "csv": render_csv,
    "text": render_text,
}


def render(result: CommandResult, output_format: str) -> str:
    """Dispatch on ``output_format``.

    Raises
    ------
    ValueError
        If the format is unknown.
    """
    if output_format not in _RENDERERS:
        raise ValueError(f"unknown output format {output_format!r}")
    return _RENDERERS[output_format](result)
