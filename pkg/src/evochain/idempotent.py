"""Idempotent elements: x with x * x = x.

For the two-parameter exponential family the idempotents of each time
snapshot are known in closed form: besides 0 and the equal-coordinate point
(lam**-t, lam**-t), a conjugate pair exists exactly while
lam**t * (2 * mu**t - lam**t) stays positive.  For lam > mu that expression
crosses zero at the critical time ln(2) / (ln(lam) - ln(mu)) and the pair
disappears.

`idempotent_oracle` is the independent numeric route (grid + Newton) used to
cross-check the closed forms; it works for any algebra, not just the family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _roots
from .algebra import EvolutionAlgebra
from .errors import InputError


class Exactness(Enum):
    CLOSED_FORM = "closed_form"
    NUMERIC = "numeric"


@dataclass(frozen=True)
class IdempotentSet:
    """Idempotent points (rows, lexicographically sorted) and how they were found."""

    points: np.ndarray
    exactness: Exactness

    def __len__(self):
        return len(self.points)


def _sorted_points(pts) -> np.ndarray:
    return np.array(sorted(tuple(p) for p in pts), dtype=float)


def _validate_params(lam: float, mu: float):
    if lam <= 0 or mu <= 0:
        raise InputError(f"requires lambda, mu > 0, got ({lam}, {mu})")


def idempotent_critical_time(lam: float, mu: float) -> float | None:
    """Time where the conjugate idempotent pair vanishes; None if it never does."""
    _validate_params(lam, mu)
    if lam > mu:
        return math.log(2.0) / (math.log(lam) - math.log(mu))
    return None


def idempotents_example2(lam: float, mu: float, t: float) -> IdempotentSet:
    """Closed-form idempotents of the example2 snapshot at elapsed time t.

    Formulas assume the x = y root plus the two roots of the residual
    quadratic in x/y; at t = 0 with distinct parameters the snapshot is the
    identity and the set is pinned to {0, (1, 1)}.
    """
    _validate_params(lam, mu)
    if t < 0:
        raise InputError(f"t must be >= 0, got {t}")
    if lam == mu:
        c = lam**-t
        pts = [(0.0, 0.0), (0.0, c), (c, 0.0), (c, c)]
        return IdempotentSet(_sorted_points(pts), Exactness.CLOSED_FORM)
    if t == 0:
        return IdempotentSet(_sorted_points([(0.0, 0.0), (1.0, 1.0)]), Exactness.CLOSED_FORM)

    lt, ut = lam**t, mu**t
    z3 = (lam**-t, lam**-t)
    t_c = idempotent_critical_time(lam, mu)
    if t_c is not None and t >= t_c:
        return IdempotentSet(_sorted_points([(0.0, 0.0), z3]), Exactness.CLOSED_FORM)

    disc = math.sqrt(lt * (2.0 * ut - lt))
    pts = [(0.0, 0.0), z3]
    for sign in (-1.0, 1.0):
        den = ut * (lt + sign * disc)
        pts.append(((ut + sign * disc) / den, (lt - ut) / den))
    return IdempotentSet(_sorted_points(pts), Exactness.CLOSED_FORM)


def idempotent_oracle(
    algebra: EvolutionAlgebra,
    radius: float = 10.0,
    step: float = 0.05,
    tol: float = 1e-9,
) -> IdempotentSet:
    """Numeric idempotent search: refine x * x - x = 0 from a grid of starts.

    Converged roots are deduplicated at max-norm radius 1e-4 and returned
    sorted.  The default radius is deliberately generous: for decaying
    parameters the nonzero idempotents scale like lam**-t and wander far
    from the origin.  Intended for n = 2; the start grid grows as
    (2 * radius / step) ** n.
    """
    m = algebra.matrix
    mt = m.T
    eye = np.eye(algebra.n)

    def f(x):
        return (x * x) @ m - x

    def jac(x):
        return 2.0 * mt[None, :, :] * x[:, None, :] - eye

    starts = _roots.grid_points(algebra.n, radius, step)
    roots = _roots.refine(f, jac, starts, tol)
    roots = _roots.dedup(roots, 1e-4)
    roots = _roots.polish_roots(f, jac, roots)
    if len(roots):
        roots = roots[np.max(np.abs(f(roots)), axis=1) <= tol]
    roots = _roots.dedup(roots, 1e-4)
    # A multiple root keeps the residual under tol on a valley wider than the
    # dedup radius, leaving a chain of survivors where there is one true
    # root.  The idempotent set of these algebras is finite, so collapsing
    # near-survivor chains is safe.
    roots = _roots.collapse_clusters(roots, f, link_radius=4e-4)
    return IdempotentSet(roots, Exactness.NUMERIC)
