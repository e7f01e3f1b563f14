"""Plain-text matrices and vectors.

One row per line, whitespace-separated decimal or integer literals, ``#``
starts a comment line.  A vector is a single row or a single column.
"""

from __future__ import annotations

import os
from typing import TextIO

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DimensionError, InputError

__all__ = ["read_matrix", "read_vector", "parse_vector", "format_number", "format_matrix", "format_vector"]


def _lines(source: str | os.PathLike | TextIO) -> list[str]:
    if hasattr(source, "read"):
        text = source.read()
    else:
        try:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {os.fspath(source)!r}: {exc.strerror}") from exc
    return [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


def read_matrix(source: str | os.PathLike | TextIO) -> NDArray[np.float64]:
    rows = []
    for lineno, line in enumerate(_lines(source), start=1):
        try:
            rows.append([float(tok) for tok in line.split()])
        except ValueError as exc:
            raise InputError(f"row {lineno}: {exc}") from None
    if not rows:
        raise InputError("no numeric rows found")
    if len({len(r) for r in rows}) != 1:
        raise DimensionError("rows have different lengths")
    return np.array(rows)


def read_vector(source: str | os.PathLike | TextIO) -> NDArray[np.float64]:
    m = read_matrix(source)
    if m.shape[0] != 1 and m.shape[1] != 1:
        raise DimensionError(f"expected a single row or column, got shape {m.shape}")
    return m.reshape(-1)


def parse_vector(text: str) -> NDArray[np.float64]:
    """Comma-separated vector literal, e.g. ``"1.1,1.21001"``."""
    parts = [p.strip() for p in text.split(",")]
    if not text.strip() or any(not p for p in parts):
        raise InputError(f"malformed vector {text!r}")
    try:
        return np.array([float(p) for p in parts])
    except ValueError as exc:
        raise InputError(f"malformed vector {text!r}: {exc}") from None


def format_number(x: float, precision: int) -> str:
    """Fixed-point with ``precision`` decimals; 17 or more prints the shortest
    string that reads back to the identical double."""
    if precision >= 17:
        return np.format_float_positional(float(x), unique=True, trim="-")
    return f"{float(x):.{precision}f}"


def format_matrix(m: ArrayLike, precision: int = 15) -> str:
    m = np.asarray(m)
    if np.issubdtype(m.dtype, np.integer):
        return "".join(" ".join(str(int(v)) for v in row) + "\n" for row in m)
    return "".join(" ".join(format_number(v, precision) for v in row) + "\n" for row in m)


def format_vector(v: ArrayLike, precision: int = 15) -> str:
    """One entry per line."""
    return format_matrix(np.asarray(v).reshape(-1, 1), precision)

