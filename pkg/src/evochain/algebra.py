"""Finite-dimensional evolution algebras over the reals.

An evolution algebra on a basis e_1, ..., e_n is the commutative algebra with

    e_i * e_j = 0                   (i != j)
    e_i * e_i = sum_j a_ij e_j

so it is determined by its structure matrix A = (a_ij): row i holds the
coordinates of e_i^2.  Elements are plain coordinate vectors; the product of
x and y has j-th coordinate sum_i a_ij x_i y_i.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError


class EvolutionAlgebra:
    """An evolution algebra, wrapping an immutable n x n structure matrix."""

    def __init__(self, matrix):
        m = np.array(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InputError(f"structure matrix must be square, got shape {m.shape}")
        if m.shape[0] < 1:
            raise InputError("structure matrix must be at least 1 x 1")
        if not np.all(np.isfinite(m)):
            raise InputError("structure matrix entries must be finite")
        m.flags.writeable = False
        self._matrix = m

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def n(self) -> int:
        return self._matrix.shape[0]

    def multiply(self, x, y) -> np.ndarray:
        """Product of two elements given by coordinate vectors.

        The coordinate-wise factor x*y commutes bit-for-bit, so
        multiply(x, y) == multiply(y, x) exactly.
        """
        x = _as_element(x, self.n)
        y = _as_element(y, self.n)
        return (x * y) @ self._matrix

    def evolve(self, x) -> np.ndarray:
        """The square x*x of an element (the evolution map)."""
        return self.multiply(x, x)

    def __repr__(self):
        return f"EvolutionAlgebra(n={self.n})"


def _as_element(x, n: int) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.shape != (n,):
        raise InputError(f"element must be a vector of length {n}, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InputError("element coordinates must be finite")
    return v


def matrix_distance(a, b) -> float:
    """Max-norm distance between two structure matrices of equal shape."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise InputError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.max(np.abs(a - b))) if a.size else 0.0


def read_matrix(path) -> np.ndarray:
    """Read a structure matrix from a plain text file.

    Format: first line is n, followed by n lines of n whitespace-separated
    reals.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise InputError(f"{path}: empty matrix file")
    try:
        n = int(lines[0])
    except ValueError:
        raise InputError(f"{path}: first line must be the dimension, got {lines[0]!r}") from None
    if n < 1:
        raise InputError(f"{path}: dimension must be positive, got {n}")
    if len(lines) != n + 1:
        raise InputError(f"{path}: expected {n} matrix rows, found {len(lines) - 1}")
    rows = []
    for k, ln in enumerate(lines[1:], start=1):
        parts = ln.split()
        if len(parts) != n:
            raise InputError(f"{path}: row {k} has {len(parts)} entries, expected {n}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError:
            raise InputError(f"{path}: row {k} has a non-numeric entry") from None
    return np.array(rows, dtype=float)


def write_matrix(path, matrix) -> None:
    """Write a matrix in the plain text format accepted by read_matrix."""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"matrix must be square, got shape {m.shape}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{m.shape[0]}\n")
        for row in m:
            fh.write(" ".join(f"{v:.17g}" for v in row) + "\n")
