"""Flat-file output: one CSV/JSON-lines schema shared by every command.

Numbers are written with 12 significant digits; absent values are empty
fields (CSV) or nulls (JSON-lines). Writers remove partial files on failure
so a crashed run never leaves a truncated artifact behind.
"""
from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Iterable, Mapping

from .sweep import SweepRow

__all__ = [
    "CSV_COLUMNS",
    "format_number",
    "row_to_dict",
    "render_csv",
    "render_jsonl",
    "write_text",
    "append_csv_row",
    "write_meta",
]

CSV_COLUMNS = (
    "curve", "vary", "n", "l", "r", "k", "lambda", "c",
    "mode", "analytic_age", "sim_age", "sim_stderr", "skipped",
)


def format_number(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def row_to_dict(row: SweepRow) -> dict[str, object]:
    return {
        "curve": row.curve,
        "vary": row.vary,
        "n": row.n,
        "l": row.l,
        "r": row.r,
        "k": row.k,
        "lambda": row.lam,
        "c": row.c,
        "mode": row.mode,
        "analytic_age": row.analytic_age,
        "sim_age": row.sim_age,
        "sim_stderr": row.sim_stderr,
        "skipped": row.skipped,
    }


def _csv_line(values: Iterable[object]) -> str:
    return ",".join(format_number(v) for v in values)


def render_csv(rows: Iterable[Mapping[str, object]]) -> str:
    lines = [_csv_line(CSV_COLUMNS)]
    lines.extend(_csv_line(row.get(col) for col in CSV_COLUMNS) for row in rows)
    return "\n".join(lines) + "\n"


def render_jsonl(rows: Iterable[Mapping[str, object]]) -> str:
    return "".join(
        json.dumps({col: row.get(col) for col in CSV_COLUMNS}, sort_keys=False) + "\n"
        for row in rows
    )


def write_text(path: str | os.PathLike, content: str) -> None:
    """Write a whole file; remove it again if the write fails."""
    target = Path(path)
    try:
        with open(target, "w", encoding="utf-8", newline="") as fh:
            fh.write(content)
    except BaseException:
        target.unlink(missing_ok=True)
        raise


def append_csv_row(path: str | os.PathLike, row: Mapping[str, object]) -> None:
    """Append one row, creating the file (with header) on first use."""
    target = Path(path)
    fresh = not target.exists()
    with open(target, "a", encoding="utf-8", newline="") as fh:
        if fresh:
            fh.write(_csv_line(CSV_COLUMNS) + "\n")
        fh.write(_csv_line(row.get(col) for col in CSV_COLUMNS) + "\n")


def write_meta(path: str | os.PathLike, payload: Mapping[str, object]) -> None:
    """Sidecar JSON with the fully resolved configuration; key-sorted so
    identical configs produce identical bytes."""
    write_text(path, json.dumps(payload, sort_keys=True, indent=2) + "\n")
