"""Absolute nilpotent elements: x with x * x = 0.

Componentwise, x is an absolute nilpotent exactly when the squares vector
(x_1^2, ..., x_n^2) lies in the kernel of C, where C[j][i] = a_ij collects
the coefficient of x_i^2 in output component j (C is the transpose of the
structure matrix).  The classifier below reasons about that kernel subject
to the sign constraint "every component of the kernel vector is a square".

The orientation matters: analyzing M and analyzing its transpose answer two
different questions, and only the C = transpose(structure matrix) form
matches the product convention used by EvolutionAlgebra.multiply.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _roots
from .algebra import EvolutionAlgebra
from .errors import InputError


class NilpotentKind(Enum):
    UNIQUE_ZERO = "unique_zero"
    INFINITE_CONE = "infinite_cone"
    INFINITE_FREE = "infinite_free"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class NilpotentSet:
    """Classification of the absolute nilpotent set of one algebra.

    kind UNIQUE_ZERO: only x = 0.
    kind INFINITE_CONE: rank n-1 case with every tied variable satisfying
        x_i^2 = cone_coefficients[k] * x_f^2 for the free index f
        (coefficients are ordered by ascending pivot variable index).
    kind INFINITE_FREE: the variables in free_indices are unconstrained
        (their coefficient columns vanish), so (0, ..., x_i, ..., 0) are
        nilpotent for any values there.
    kind UNDETERMINED: the sign analysis is inconclusive at this tolerance.
    """

    kind: NilpotentKind
    det: float
    rank: int
    free_indices: tuple[int, ...] | None = None
    cone_free_index: int | None = None
    cone_coefficients: tuple[float, ...] | None = None


def _rref(c: np.ndarray, thresh: float):
    """Reduced row echelon via partial pivoting; returns (matrix, pivot_cols)."""
    a = c.astype(float).copy()
    n_rows, n_cols = a.shape
    pivot_cols = []
    row = 0
    for col in range(n_cols):
        if row == n_rows:
            break
        i = row + int(np.argmax(np.abs(a[row:, col])))
        if abs(a[i, col]) <= thresh:
            continue
        if i != row:
            a[[row, i]] = a[[i, row]]
        a[row] = a[row] / a[row, col]
        for r in range(n_rows):
            if r != row and a[r, col] != 0.0:
                a[r] = a[r] - a[r, col] * a[row]
        pivot_cols.append(col)
        row += 1
    return a, pivot_cols


def nilpotent_analysis(algebra: EvolutionAlgebra, eps: float = 1e-9) -> NilpotentSet:
    """Classify the absolute nilpotent set of `algebra`.

    Invertible C (|det| > eps, or full echelon rank) forces all squares to
    zero, hence UNIQUE_ZERO.  At rank n-1 the kernel is a line y_i = -d_i *
    y_f; a nonzero nilpotent needs every component of that line nonnegative,
    so all d_i < -eps gives an INFINITE_CONE, any d_i > eps kills it, and
    values inside the tolerance band stay UNDETERMINED.  Below rank n-1 only
    the clean case is decided: identically zero coefficient columns make
    their variables free (INFINITE_FREE); anything else is UNDETERMINED.
    """
    if eps <= 0:
        raise InputError(f"eps must be positive, got {eps}")
    m = algebra.matrix
    n = algebra.n
    c = m.T.copy()
    det = float(np.linalg.det(c))
    thresh = eps * (1.0 + float(np.max(np.abs(c))))
    a, pivot_cols = _rref(c, thresh)
    rank = len(pivot_cols)

    if abs(det) > eps or rank == n:
        return NilpotentSet(NilpotentKind.UNIQUE_ZERO, det=det, rank=rank)

    if rank == n - 1:
        free = next(j for j in range(n) if j not in pivot_cols)
        d = np.array([a[k, free] for k in range(rank)])
        if np.any(d > eps):
            return NilpotentSet(NilpotentKind.UNIQUE_ZERO, det=det, rank=rank)
        if np.all(d < -eps):
            return NilpotentSet(
                NilpotentKind.INFINITE_CONE,
                det=det,
                rank=rank,
                cone_free_index=free,
                cone_coefficients=tuple(float(-di) for di in d),
            )
        return NilpotentSet(NilpotentKind.UNDETERMINED, det=det, rank=rank)

    col_mag = np.max(np.abs(c), axis=0)
    zero_cols = tuple(int(i) for i in range(n) if col_mag[i] <= thresh)
    if zero_cols:
        return NilpotentSet(NilpotentKind.INFINITE_FREE, det=det, rank=rank, free_indices=zero_cols)
    return NilpotentSet(NilpotentKind.UNDETERMINED, det=det, rank=rank)


def nilpotent_oracle(
    algebra: EvolutionAlgebra,
    radius: float = 2.0,
    step: float = 0.05,
    tol: float = 1e-8,
) -> np.ndarray:
    """Numeric search for absolute nilpotents, independent of the classifier.

    Newton-refines every point of the grid [-radius, radius]^n against
    x * x = 0 and returns the distinct converged roots (rows, sorted
    lexicographically; duplicates within max-norm 1e-4 collapsed).
    """
    m = algebra.matrix
    mt = m.T

    def f(x):
        return (x * x) @ m

    def jac(x):
        return 2.0 * mt[None, :, :] * x[:, None, :]

    starts = _roots.grid_points(algebra.n, radius, step)
    roots = _roots.refine(f, jac, starts, tol)
    roots = _roots.dedup(roots, 1e-4)
    roots = _roots.polish_roots(f, jac, roots)
    if len(roots):
        roots = roots[np.max(np.abs(f(roots)), axis=1) <= tol]
    return _roots.dedup(roots, 1e-4)
