"""Plain-text complex matrices.

First line ``n``, then ``n`` rows of ``n`` whitespace-separated entries written
as ``RE{+|-}IMj`` with 17 significant digits, which round-trips doubles.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .witness import check_su


class MatrixFormatError(ValueError):
    pass


def format_entry(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def dumps(u: np.ndarray) -> str:
    u = np.asarray(u, dtype=complex)
    lines = [str(u.shape[0])]
    lines += [" ".join(format_entry(z) for z in row) for row in u]
    return "\n".join(lines) + "\n"


def loads(text: str, require_su: bool = True) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MatrixFormatError("empty matrix file")
    try:
        n = int(lines[0])
    except ValueError:
        raise MatrixFormatError(f"first line must be the dimension, got {lines[0]!r}") from None
    if n < 1 or len(lines) != n + 1:
        raise MatrixFormatError(f"expected {n} rows after the dimension line, got {len(lines) - 1}")
    rows = []
    for i, ln in enumerate(lines[1:], start=2):
        tokens = ln.split()
        if len(tokens) != n:
            raise MatrixFormatError(f"line {i}: expected {n} entries, got {len(tokens)}")
        try:
            rows.append([complex(tok) for tok in tokens])
        except ValueError:
            raise MatrixFormatError(f"line {i}: bad complex entry in {ln!r}") from None
    u = np.array(rows, dtype=complex)
    if require_su:
        try:
            check_su(u)
        except ValueError as exc:
            raise MatrixFormatError(str(exc)) from exc
    return u


def write_matrix(path: str | Path, u: np.ndarray) -> None:
    Path(path).write_text(dumps(u))


def read_matrix(path: str | Path, require_su: bool = True) -> np.ndarray:
    return loads(Path(path).read_text(), require_su=require_su)
