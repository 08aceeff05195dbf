"""Dense matrix file I/O: MatrixMarket array files and a small JSON layout.

The JSON layout is {"rows": r, "cols": c, "data": [...]} with data in
row-major order, written with 17 significant digits so doubles survive a
round trip.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from scipy import io as spio

from .linalg import as_matrix

__all__ = [
    "save_matrix_json",
    "load_matrix_json",
    "save_matrix_market",
    "load_matrix_market",
    "load_matrix",
]


def save_matrix_json(path, A):
    A = as_matrix(A)
    obj = {
        "rows": int(A.shape[0]),
        "cols": int(A.shape[1]),
        "data": [float(f"{x:.17g}") for x in A.ravel(order="C")],
    }
    with open(path, "w") as fh:
        json.dump(obj, fh)
        fh.write("\n")


def load_matrix_json(path):
    with open(path) as fh:
        obj = json.load(fh)
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError) as e:
        raise ValueError(f"{path}: expected keys rows/cols/data ({e})") from e
    if len(data) != rows * cols:
        raise ValueError(f"{path}: data length {len(data)} != rows*cols {rows * cols}")
    return np.array(data, dtype=float).reshape(rows, cols)


def save_matrix_market(path, A):
    spio.mmwrite(str(path), as_matrix(A), precision=17)


def load_matrix_market(path):
    M = spio.mmread(str(path))
    if hasattr(M, "toarray"):
        M = M.toarray()
    return np.asarray(M, dtype=float)


def load_matrix(path):
    """Load a matrix, dispatching on the file suffix (.json vs MatrixMarket)."""
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"matrix file not found: {path}")
    if p.suffix.lower() == ".json":
        return load_matrix_json(p)
    return load_matrix_market(p)
