"""Two-dimensional rotation algebras: isomorphism classes and density.

The algebras here have structure matrix [[a, q], [-q, a]] (the + family) or
[[a, -q], [q, a]] (the - family) with q = sqrt(1 - a^2).  Up to isomorphism
the parameter is determined by |a|: a basis change can only flip its sign.
The discrete-time rotation chain visits the matrices with a = cos(n), and
since the integers are equidistributed mod 2*pi, every parameter value is
approached; `density_search` finds witnesses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError

_SIGNS = ("+", "-")


def _check_sign(sign: str):
    if sign not in _SIGNS:
        raise InputError(f"sign must be '+' or '-', got {sign!r}")


@dataclass(frozen=True)
class RotAlgebra:
    """One rotation algebra: parameter a in [-1, 1] and the sign branch."""

    a: float
    sign: str = "+"

    def __post_init__(self):
        if not -1.0 <= self.a <= 1.0:
            raise InputError(f"rotation parameter a must lie in [-1, 1], got {self.a}")
        _check_sign(self.sign)

    @property
    def matrix(self) -> np.ndarray:
        q = math.sqrt(1.0 - self.a * self.a)
        if self.sign == "-":
            q = -q
        return np.array([[self.a, q], [-q, self.a]])


@dataclass(frozen=True)
class BasisChange2:
    """An invertible 2x2 basis transform with entries (alpha, beta; gamma, delta)."""

    alpha: float
    beta: float
    gamma: float
    delta: float

    def __post_init__(self):
        if self.det == 0:
            raise InputError("basis change must be invertible (alpha*delta - beta*gamma != 0)")

    @property
    def det(self) -> float:
        return self.alpha * self.delta - self.beta * self.gamma


def change_basis_2d(src: RotAlgebra, phi: BasisChange2) -> np.ndarray:
    """Structure matrix of `src` rewritten in the basis transformed by `phi`.

    Each entry is a cubic form in the transform entries divided by det(phi);
    the sign branch of `src` enters only through the sign of q.
    """
    a = src.a
    q = math.sqrt(1.0 - a * a)
    if src.sign == "-":
        q = -q
    al, be, ga, de = phi.alpha, phi.beta, phi.gamma, phi.delta
    p = a * de - q * ga
    r = a * ga + q * de
    u = a * al + q * be
    v = a * be - q * al
    out = np.array(
        [
            [p * al**2 - r * be**2, u * be**2 - v * al**2],
            [p * ga**2 - r * de**2, u * de**2 - v * ga**2],
        ]
    )
    return out / phi.det


def iso_rotation(a: float, b: float, sign: str = "+") -> bool:
    """True iff the rotation algebras with parameters a, b are isomorphic (b = +-a)."""
    _check_sign(sign)
    if not -1.0 <= a <= 1.0 or not -1.0 <= b <= 1.0:
        raise InputError(f"parameters must lie in [-1, 1], got a={a}, b={b}")
    return abs(b - a) <= 1e-12 or abs(b + a) <= 1e-12


def density_search(a: float, tol: float, n_max: int):
    """Smallest natural n <= n_max with |cos(n) - a| <= tol, or None.

    Returns (n, sign) where sign is '+' for sin(n) >= 0 and '-' otherwise,
    naming which branch the discrete chain hits.  None only means the budget
    ran out: witnesses exist for every a once n_max is large enough.
    """
    if not -1.0 <= a <= 1.0:
        raise InputError(f"parameter a must lie in [-1, 1], got {a}")
    if tol <= 0:
        raise InputError(f"tol must be positive, got {tol}")
    if n_max < 1:
        raise InputError(f"n_max must be >= 1, got {n_max}")
    for n in range(1, int(n_max) + 1):
        if abs(math.cos(n) - a) <= tol:
            return n, ("+" if math.sin(n) >= 0 else "-")
    return None
