"""Matrix Market coordinate I/O for ODN matrices.

Reads `coordinate real symmetric` files (or `general` with exact
symmetry), rejecting duplicate coordinates. Writes the lower triangle
sorted by (column, row) with 17 significant digits, which round-trips
double precision bit-exactly; zero diagonal entries are omitted.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .core import OdnMatrix, validate_odn
from .errors import DuplicateEntryError, ParseError

_BANNER = "%%matrixmarket"


def read_matrix_market(path) -> OdnMatrix:
    """Parse and validate a Matrix Market coordinate file."""
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise ParseError(1, "empty file")

    header = lines[0].split()
    if len(header) != 5 or header[0].lower() != _BANNER:
        raise ParseError(1, f"not a Matrix Market header: {lines[0]!r}")
    _, obj, fmt, field, symmetry = (tok.lower() for tok in header)
    if obj != "matrix" or fmt != "coordinate":
        raise ParseError(1, f"unsupported format {obj} {fmt}; need matrix coordinate")
    if field not in ("real", "integer"):
        raise ParseError(1, f"unsupported field type {field!r}")
    if symmetry not in ("symmetric", "general"):
        raise ParseError(1, f"unsupported symmetry {symmetry!r}")

    lineno = 1
    size = None
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    seen: set[tuple[int, int]] = set()
    expected = 0

    for raw in lines[1:]:
        lineno += 1
        text = raw.strip()
        if not text or text.startswith("%"):
            continue
        tokens = text.split()
        if size is None:
            if len(tokens) != 3:
                raise ParseError(lineno, f"size line needs 3 integers: {text!r}")
            try:
                nrows, ncols, expected = (int(t) for t in tokens)
            except ValueError:
                raise ParseError(lineno, f"size line needs 3 integers: {text!r}")
            if nrows != ncols:
                raise ParseError(lineno, f"matrix must be square, got {nrows}x{ncols}")
            if nrows < 1 or expected < 0:
                raise ParseError(lineno, f"invalid size line: {text!r}")
            size = nrows
            continue
        if len(tokens) != 3:
            raise ParseError(lineno, f"entry needs 'i j value': {text!r}")
        try:
            i, j = int(tokens[0]), int(tokens[1])
            value = float(tokens[2])
        except ValueError:
            raise ParseError(lineno, f"malformed entry: {text!r}")
        if not (1 <= i <= size and 1 <= j <= size):
            raise ParseError(lineno, f"index out of range in {text!r}")
        key = (max(i, j), min(i, j)) if symmetry == "symmetric" else (i, j)
        if key in seen:
            raise DuplicateEntryError(i, j)
        seen.add(key)
        rows.append(i - 1)
        cols.append(j - 1)
        vals.append(value)
        if len(vals) > expected:
            raise ParseError(lineno, f"more than {expected} entries")

    if size is None:
        raise ParseError(lineno, "missing size line")
    if len(vals) != expected:
        raise ParseError(lineno, f"expected {expected} entries, found {len(vals)}")

    r = np.asarray(rows, dtype=np.int64)
    c = np.asarray(cols, dtype=np.int64)
    v = np.asarray(vals, dtype=np.float64)
    if symmetry == "symmetric":
        off = r != c
        r, c, v = (
            np.concatenate([r, c[off]]),
            np.concatenate([c, r[off]]),
            np.concatenate([v, v[off]]),
        )
    coo = sp.coo_matrix((v, (r, c)), shape=(size, size))
    return validate_odn(coo)


def write_matrix_market(matrix: OdnMatrix, path) -> None:
    """Write an ODN matrix as `coordinate real symmetric`, lower triangle."""
    entries = [
        (int(j) + 1, int(i) + 1, float(v))  # lower triangle: row > col
        for i, j, v in zip(matrix.rows, matrix.cols, matrix.vals)
    ]
    entries.extend(
        (i + 1, i + 1, float(v))
        for i, v in enumerate(matrix.diag)
        if v != 0.0
    )
    entries.sort(key=lambda e: (e[1], e[0]))  # by (column, row)

    out = ["%%MatrixMarket matrix coordinate real symmetric"]
    out.append(f"{matrix.n} {matrix.n} {len(entries)}")
    out.extend(f"{row} {col} {value:.16e}" for row, col, value in entries)
    Path(path).write_text("\n".join(out) + "\n")
