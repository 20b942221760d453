"""MacKay alist reader and writer."""

from __future__ import annotations

from pathlib import Path
from typing import List

from loguru import logger

from ..common.errors import MalformedAlist
from .matrix import SparseBinaryMatrix


def _ints(line: str, what: str) -> List[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError as e:
        raise MalformedAlist(f"Non-integer token in {what}: {e}") from e


def parse_alist(text: str) -> SparseBinaryMatrix:
    """Parse alist text.

    Layout: "N M", max column/row weights, N column weights, M row weights,
    N lines of 1-based row indices, M lines of 1-based column indices. Zero
    entries are padding and are ignored.
    """
    lines = [line for line in text.splitlines() if line.strip()]
    if len(lines) < 4:
        raise MalformedAlist("alist needs at least 4 header lines")

    header = _ints(lines[0], "header")
    if len(header) != 2:
        raise MalformedAlist("Header line must hold 'N M'")
    n_cols, n_rows = header
    if n_cols <= 0 or n_rows <= 0:
        raise MalformedAlist(f"Matrix must be non-empty, got {n_rows}x{n_cols}")

    maxima = _ints(lines[1], "max weights")
    if len(maxima) != 2:
        raise MalformedAlist("Second line must hold the two maximum weights")
    col_weights = _ints(lines[2], "column weights")
    row_weights = _ints(lines[3], "row weights")
    if len(col_weights) != n_cols:
        raise MalformedAlist(
            f"Expected {n_cols} column weights, found {len(col_weights)}"
        )
    if len(row_weights) != n_rows:
        raise MalformedAlist(f"Expected {n_rows} row weights, found {len(row_weights)}")
    if max(col_weights) > maxima[0] or max(row_weights) > maxima[1]:
        raise MalformedAlist("A weight exceeds its declared maximum")

    body = lines[4:]
    if len(body) != n_cols + n_rows:
        raise MalformedAlist(
            f"Expected {n_cols + n_rows} index lines, found {len(body)}"
        )

    def entries(line: str, weight: int, bound: int, label: str) -> List[int]:
        values = [v for v in _ints(line, label) if v != 0]
        if len(values) != weight:
            raise MalformedAlist(
                f"{label} declares weight {weight} but lists {len(values)} entries"
            )
        if any(v < 1 or v > bound for v in values) or len(set(values)) != len(values):
            raise MalformedAlist(f"{label} has an out-of-range or repeated index")
        return [v - 1 for v in values]

    cols = [
        entries(body[c], col_weights[c], n_rows, f"column {c + 1}")
        for c in range(n_cols)
    ]
    rows = [
        entries(body[n_cols + r], row_weights[r], n_cols, f"row {r + 1}")
        for r in range(n_rows)
    ]

    from_rows = {(r, c) for r, row in enumerate(rows) for c in row}
    from_cols = {(r, c) for c, col in enumerate(cols) for r in col}
    if from_rows != from_cols:
        raise MalformedAlist("Row and column index lists disagree")

    return SparseBinaryMatrix.from_rows(n_rows, n_cols, rows)


def write_alist(matrix: SparseBinaryMatrix) -> str:
    """Serialize to alist with zero padding to the maximum weights."""
    col_weights = matrix.col_weights()
    row_weights = matrix.row_weights()
    max_col = max(col_weights, default=0)
    max_row = max(row_weights, default=0)

    def padded(indices, width: int) -> str:
        values = [i + 1 for i in indices] + [0] * (width - len(indices))
        return " ".join(str(v) for v in values) if values else "0"

    out = [
        f"{matrix.n_cols} {matrix.n_rows}",
        f"{max_col} {max_row}",
        " ".join(str(w) for w in col_weights),
        " ".join(str(w) for w in row_weights),
    ]
    out.extend(padded(col, max_col) for col in matrix.col_adj)
    out.extend(padded(row, max_row) for row in matrix.row_adj)
    return "\n".join(out) + "\n"


def load_alist(path: Path) -> SparseBinaryMatrix:
    matrix = parse_alist(Path(path).read_text(encoding="utf-8"))
    logger.debug(f"Loaded {matrix.n_rows}x{matrix.n_cols} parity-check matrix from {path}")
    return matrix
