"""Baric structure and triviality classification.

An evolution algebra is baric when it admits a nonzero algebra homomorphism
to the ground field.  For a structure matrix A this happens exactly when some
column i0 has a nonzero diagonal entry and zero off-diagonal entries; the
homomorphism is then sigma(x) = a_{i0,i0} * x_{i0}, and distinct qualifying
columns give distinct weight functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .algebra import EvolutionAlgebra


@dataclass(frozen=True)
class WeightFunction:
    """sigma(x) = coefficient * x[index]; index is 0-based."""

    index: int
    coefficient: float

    def __call__(self, x) -> float:
        return self.coefficient * float(np.asarray(x, dtype=float)[self.index])


class TrivialClass(Enum):
    ZERO = "zero"
    NONZERO_TRIVIAL = "nonzero_trivial"
    NONTRIVIAL = "nontrivial"


def weight_functions(algebra: EvolutionAlgebra, eps: float = 1e-9) -> list[WeightFunction]:
    """All weight functions of the algebra, in ascending column order.

    A column qualifies when its diagonal entry exceeds eps in magnitude and
    every off-diagonal entry is at most eps in magnitude.  The returned list
    is empty exactly when the algebra is not baric (up to eps).
    """
    m = algebra.matrix
    out = []
    for i0 in range(algebra.n):
        col = m[:, i0]
        if abs(col[i0]) <= eps:
            continue
        off = np.abs(np.delete(col, i0)) if algebra.n > 1 else np.empty(0)
        if off.size == 0 or np.max(off) <= eps:
            out.append(WeightFunction(index=i0, coefficient=float(col[i0])))
    return out


def is_baric(algebra: EvolutionAlgebra, eps: float = 1e-9) -> bool:
    return bool(weight_functions(algebra, eps))


def classify_trivial(algebra: EvolutionAlgebra, eps: float = 1e-9) -> TrivialClass:
    """Classify trivial multiplication tables.

    ZERO: every entry at most eps in magnitude (the zero algebra).
    NONZERO_TRIVIAL: diagonal structure matrix with some nonzero diagonal
    entry, i.e. e_i^2 = a_ii e_i for all i; always baric.
    NONTRIVIAL: everything else.
    """
    m = algebra.matrix
    if np.max(np.abs(m)) <= eps:
        return TrivialClass.ZERO
    off = m.copy()
    np.fill_diagonal(off, 0.0)
    if np.max(np.abs(off)) <= eps:
        return TrivialClass.NONZERO_TRIVIAL
    return TrivialClass.NONTRIVIAL
