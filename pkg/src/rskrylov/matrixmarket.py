"""Matrix Market coordinate files and plain vector files.

The reader handles ``coordinate real`` matrices in ``general`` or
``symmetric`` layout (symmetric files mirror their off-diagonal entries),
converts the 1-based indices, and sums duplicate entries.  Parse errors
carry the offending line number.  Only square matrices are accepted; the
``pattern`` and ``complex`` fields are rejected.
"""

from __future__ import annotations

import numpy as np

from .operators import sparse_from_triplets

__all__ = [
    "MatrixMarketError",
    "read_matrix_market",
    "write_matrix_market",
    "read_vector",
    "write_vector",
]


class MatrixMarketError(ValueError):
    """Malformed Matrix Market input."""


def read_matrix_market(path):
    """Read a square sparse matrix from a Matrix Market coordinate file."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline()
        if not header.startswith("%%MatrixMarket"):
            raise MatrixMarketError(f"{path}:1: missing %%MatrixMarket header")
        fields = header.split()
        if len(fields) < 5:
            raise MatrixMarketError(f"{path}:1: incomplete header: {header.strip()!r}")
        obj, fmt, field, symmetry = (f.lower() for f in fields[1:5])
        if obj != "matrix" or fmt != "coordinate":
            raise MatrixMarketError(
                f"{path}:1: only 'matrix coordinate' files are supported"
            )
        if field != "real":
            raise MatrixMarketError(
                f"{path}:1: unsupported field {field!r} (only 'real')"
            )
        if symmetry not in ("general", "symmetric"):
            raise MatrixMarketError(
                f"{path}:1: unsupported symmetry {symmetry!r} "
                "(only 'general' or 'symmetric')"
            )

        lineno = 1
        size = None
        for line in fh:
            lineno += 1
            stripped = line.strip()
            if not stripped or stripped.startswith("%"):
                continue
            parts = stripped.split()
            if len(parts) != 3:
                raise MatrixMarketError(
                    f"{path}:{lineno}: expected 'rows cols nnz', got {stripped!r}"
                )
            try:
                nrows, ncols, nnz = (int(p) for p in parts)
            except ValueError as exc:
                raise MatrixMarketError(f"{path}:{lineno}: bad size line: {exc}")
            size = (nrows, ncols, nnz)
            break
        if size is None:
            raise MatrixMarketError(f"{path}: no size line found")
        nrows, ncols, nnz = size
        if nrows != ncols:
            raise MatrixMarketError(
                f"{path}:{lineno}: matrix must be square, got {nrows} x {ncols}"
            )

        rows, cols, vals = [], [], []
        seen = 0
        for line in fh:
            lineno += 1
            stripped = line.strip()
            if not stripped or stripped.startswith("%"):
                continue
            parts = stripped.split()
            if len(parts) != 3:
                raise MatrixMarketError(
                    f"{path}:{lineno}: expected 'i j value', got {stripped!r}"
                )
            try:
                i, j = int(parts[0]), int(parts[1])
                v = float(parts[2])
            except ValueError as exc:
                raise MatrixMarketError(f"{path}:{lineno}: bad entry: {exc}")
            if not (1 <= i <= nrows and 1 <= j <= ncols):
                raise MatrixMarketError(
                    f"{path}:{lineno}: index ({i}, {j}) out of range for "
                    f"{nrows} x {ncols} matrix (indices are 1-based)"
                )
            rows.append(i - 1)
            cols.append(j - 1)
            vals.append(v)
            if symmetry == "symmetric" and i != j:
                rows.append(j - 1)
                cols.append(i - 1)
                vals.append(v)
            seen += 1
        if seen != nnz:
            raise MatrixMarketError(
                f"{path}: header announced {nnz} entries, found {seen}"
            )
    return sparse_from_triplets(nrows, rows, cols, vals)


def write_matrix_market(path, A, comment=None):
    """Write a sparse (or dense) square matrix as coordinate real general."""
    import scipy.sparse as sp

    coo = sp.coo_matrix(A)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("%%MatrixMarket matrix coordinate real general\n")
        if comment:
            for line in str(comment).splitlines():
                fh.write(f"% {line}\n")
        fh.write(f"{coo.shape[0]} {coo.shape[1]} {coo.nnz}\n")
        for i, j, v in zip(coo.row, coo.col, coo.data):
            fh.write(f"{i + 1} {j + 1} {float(v)!r}\n")


def read_vector(path):
    """Read a dense vector: one floating-point value per line, '%' or '#'
    comments allowed."""
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith(("%", "#")):
                continue
            try:
                values.append(float(stripped))
            except ValueError as exc:
                raise MatrixMarketError(f"{path}:{lineno}: bad value: {exc}")
    return np.asarray(values, dtype=np.float64)


def write_vector(path, v):
    with open(path, "w", encoding="utf-8") as fh:
        for x in np.asarray(v, dtype=np.float64):
            fh.write(f"{float(x)!r}\n")
