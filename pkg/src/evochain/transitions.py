"""Property transitions in time: controllers, baric durations, diagrams.

The two-state family makes the baric property a statement about a single
scalar curve: with theta(t) = 1/Phi(t) + Psi(t), the snapshot over (s, t) is
baric off the diagonal exactly when theta(t) = theta(s) (and the mirrored
criterion uses theta_minus = 1/Phi - Psi).  This module finds those times,
computes the closed-form critical times for the exp-plus-linear controller,
and rasterizes property verdicts over the time triangle 0 <= s <= t <= t_max
into diagrams with a CSV export.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .algebra import EvolutionAlgebra
from .baric import weight_functions
from .chains import ChainFamily, TimeFunction
from .errors import EvaluationDomainError, InputError
from .idempotent import idempotent_oracle
from .nilpotent import NilpotentKind, nilpotent_analysis

_BISECT_FTOL = 1e-12


@dataclass(frozen=True)
class Controller:
    """A scalar controller theta (and, when composed, theta_minus).

    Catalog kinds supply theta directly: tan, sin, const(c), and
    explinear(lam, c) with theta(t) = lam**-t + c*t.  Composed controllers
    carry both theta and theta_minus derived from (phi, psi).
    """

    kind: str
    params: tuple = ()
    phi: TimeFunction | None = None
    psi: TimeFunction | None = None

    def theta(self, t: float) -> float:
        if self.kind == "tan":
            return TimeFunction.tan()(t)
        if self.kind == "sin":
            return math.sin(t)
        if self.kind == "const":
            return self.params[0]
        if self.kind == "explinear":
            lam, c = self.params
            return lam**-t + c * t
        p = self.phi(t)
        if p == 0:
            raise EvaluationDomainError(f"controller phi vanishes at t = {t}")
        return 1.0 / p + self.psi(t)

    def theta_minus(self, t: float) -> float:
        if self.kind == "composed":
            p = self.phi(t)
            if p == 0:
                raise EvaluationDomainError(f"controller phi vanishes at t = {t}")
            return 1.0 / p - self.psi(t)
        if self.kind == "explinear":
            lam, c = self.params
            return lam**-t - c * t
        raise InputError(f"theta_minus is undefined for catalog controller {self.kind!r}")

    def poles_in(self, lo: float, hi: float) -> list[float]:
        if self.kind == "tan":
            return TimeFunction.tan().poles_in(lo, hi)
        if self.kind == "composed":
            out = set(self.phi.poles_in(lo, hi)) | set(self.psi.poles_in(lo, hi))
            return sorted(out)
        return []


def controller_from(phi: TimeFunction, psi: TimeFunction) -> Controller:
    """Controller with theta = 1/phi + psi and theta_minus = 1/phi - psi."""
    return Controller("composed", phi=phi, psi=psi)


def tan_controller() -> Controller:
    return Controller("tan")


def sin_controller() -> Controller:
    return Controller("sin")


def const_controller(c: float = 1.0) -> Controller:
    return Controller("const", (float(c),))


def explinear_controller(lam: float, c: float) -> Controller:
    if lam <= 0:
        raise InputError(f"explinear controller requires lambda > 0, got {lam}")
    return Controller("explinear", (float(lam), float(c)))


def _bisect(g, a: float, b: float, ga: float, gb: float) -> float:
    """Sign-change bisection, stopping on |g| <= 1e-12 or interval exhaustion."""
    for _ in range(200):
        mid = 0.5 * (a + b)
        gm = g(mid)
        if abs(gm) <= _BISECT_FTOL or (b - a) <= 1e-15 * (1.0 + abs(mid)):
            return mid
        if (ga < 0) == (gm < 0):
            a, ga = mid, gm
        else:
            b, gb = mid, gm
    return 0.5 * (a + b)


def baric_times(controller: Controller, s: float, window: tuple, tol: float = 1e-10) -> list[float]:
    """All t in the window with theta(t) = theta(s), t = s included.

    A fine scan (10^4 steps, split at controller poles) brackets sign changes
    of theta(t) - theta(s); each bracket is bisected until the residual drops
    below 1e-12.  Scan points that already sit on a zero are kept directly.
    """
    lo, hi = float(window[0]), float(window[1])
    if not lo < hi:
        raise InputError(f"window must satisfy lo < hi, got ({lo}, {hi})")
    if tol <= 0:
        raise InputError(f"tol must be positive, got {tol}")
    target = controller.theta(s)

    def g(t):
        return controller.theta(t) - target

    step = (hi - lo) / 1e4
    margin = step * 1e-6
    bounds = [lo]
    for p in controller.poles_in(lo, hi):
        bounds.extend((p - margin, p + margin))
    bounds.append(hi)

    roots = []
    if lo <= s <= hi:
        roots.append(float(s))
    for a, b in zip(bounds[::2], bounds[1::2]):
        if b <= a:
            continue
        xs = np.linspace(a, b, max(int(round((b - a) / step)), 2) + 1)
        gs = np.array([g(x) for x in xs])
        for i in range(len(xs) - 1):
            if abs(gs[i]) <= _BISECT_FTOL:
                roots.append(float(xs[i]))
            elif gs[i] * gs[i + 1] < 0:
                roots.append(_bisect(g, xs[i], xs[i + 1], gs[i], gs[i + 1]))
        if abs(gs[-1]) <= _BISECT_FTOL:
            roots.append(float(xs[-1]))

    roots = [t for t in roots if abs(g(t)) <= max(tol, _BISECT_FTOL)]
    if lo <= s <= hi:
        # the scan rediscovers t = s as a bisected near-copy; keep s exact
        roots = [float(s)] + [t for t in roots if abs(t - s) > 0.5 * step]
    roots.sort()
    out: list[float] = []
    for t in roots:
        if not out or t - out[-1] > 0.5 * step:
            out.append(float(t))
    return out


@dataclass(frozen=True)
class CriticalTimes:
    """Baric-transition times of the explinear controller; case names the branch."""

    t_c: float | None
    t_c_prime: float | None
    case: str

    @property
    def empty(self) -> bool:
        return self.t_c is None


def critical_times_p1(lam: float, c: float) -> CriticalTimes:
    """Critical times for theta(t) = lam**-t + c*t.

    The off-diagonal baric set is empty (the controller is one-to-one) for
    0 < lam <= 1 with c >= ln(lam), and for lam > 1 with c <= 0 or
    c >= ln(lam).  Otherwise theta dips to its minimum at
    t_c = ln(ln(lam)/c) / ln(lam) and returns to theta = 1 at t_c_prime,
    found by bisection.
    """
    if lam <= 0:
        raise InputError(f"lambda must be positive, got {lam}")
    if lam == 1.0:
        raise InputError("lambda = 1 is excluded (log(lambda) = 0 in the critical-time formula)")
    ln_lam = math.log(lam)
    if lam > 1:
        if c <= 0 or c >= ln_lam:
            return CriticalTimes(None, None, "empty")
        case = "growth"
    else:
        if c >= ln_lam:
            return CriticalTimes(None, None, "empty")
        case = "decay"

    t_c = math.log(ln_lam / c) / ln_lam

    def g(t):
        return lam**-t + c * t - 1.0

    hi = t_c + 1.0
    g_tc = g(t_c)
    for _ in range(200):
        if g(hi) > 0:
            break
        hi += hi - t_c
    t_c_prime = _bisect(g, t_c, hi, g_tc, g(hi))
    return CriticalTimes(t_c, t_c_prime, case)


class DiagramProperty(Enum):
    BARIC = "baric"
    NILPOTENT_UNIQUE = "nilpotent_unique"
    IDEMPOTENT_COUNT = "idempotent_count"


@dataclass(frozen=True)
class Diagram:
    """Rasterized property verdicts over the triangle 0 <= s <= t <= t_max.

    cells[i, j] holds the classification at the cell center
    (s_i, t_j) = ((i+0.5)h, (j+0.5)h) for i <= j; entries below the diagonal
    are unused and hold -2.  Values: 1/0 for boolean properties, a count for
    IDEMPOTENT_COUNT, and -1 for Undetermined or pole-contaminated cells.
    """

    property: DiagramProperty
    t_max: float
    resolution: int
    eps: float
    family: ChainFamily
    cells: np.ndarray

    def centers(self, i: int, j: int) -> tuple[float, float]:
        h = self.t_max / self.resolution
        return ((i + 0.5) * h, (j + 0.5) * h)

    def iter_cells(self):
        for i in range(self.resolution):
            for j in range(i, self.resolution):
                s, t = self.centers(i, j)
                yield i, j, s, t, int(self.cells[i, j])


#: Oracle settings for IdempotentCount cells: coarser than the standalone
#: oracle defaults, since every cell runs its own grid search.
_DIAGRAM_ORACLE = {"radius": 3.0, "step": 0.25, "tol": 1e-9}


def classify_point(family: ChainFamily, prop: DiagramProperty, s: float, t: float, eps: float) -> int:
    """Pointwise verdict used for diagram cells; -1 means undetermined."""
    try:
        snap = family.snapshot(s, t)
    except EvaluationDomainError:
        return -1
    if prop is DiagramProperty.BARIC:
        return 1 if weight_functions(snap, eps=eps) else 0
    if prop is DiagramProperty.NILPOTENT_UNIQUE:
        kind = nilpotent_analysis(snap, eps=eps).kind
        if kind is NilpotentKind.UNDETERMINED:
            return -1
        return 1 if kind is NilpotentKind.UNIQUE_ZERO else 0
    return len(idempotent_oracle(snap, **_DIAGRAM_ORACLE))


def diagram(
    family: ChainFamily,
    prop: DiagramProperty,
    t_max: float,
    resolution: int,
    eps: float = 1e-6,
) -> Diagram:
    """Classify every triangle cell center; see Diagram for the value coding.

    The diagram eps default (1e-6) is wider than the analyzer default on
    purpose: cell centers essentially never land exactly on a measure-zero
    transition curve, so detection needs a tolerance comparable to how close
    the curve passes.  Cells whose s- or t-extent contains a controller pole
    are marked -1 without evaluation.
    """
    if resolution < 2:
        raise InputError(f"resolution must be >= 2, got {resolution}")
    if t_max <= 0:
        raise InputError(f"t_max must be positive, got {t_max}")
    if prop is DiagramProperty.IDEMPOTENT_COUNT and family.n != 2:
        raise InputError("IdempotentCount diagrams support 2-dimensional families only")
    n = resolution
    h = t_max / n
    poles = family.poles_in(0.0, t_max)
    pole_idx = sorted({int(p / h) for p in poles if 0 <= p < t_max})
    cells = np.full((n, n), -2, dtype=int)
    for i in range(n):
        for j in range(i, n):
            if i in pole_idx or j in pole_idx:
                cells[i, j] = -1
                continue
            s, t = (i + 0.5) * h, (j + 0.5) * h
            cells[i, j] = classify_point(family, prop, s, t, eps)
    return Diagram(prop, float(t_max), n, float(eps), family, cells)


def baric_fraction(d: Diagram) -> float:
    """Fraction of triangle cells classified baric."""
    if d.property is not DiagramProperty.BARIC:
        raise InputError("baric_fraction needs a Baric diagram")
    n = d.resolution
    total = n * (n + 1) // 2
    count = 0
    for i in range(n):
        count += int(np.sum(d.cells[i, i:] == 1))
    return count / total


def write_diagram_csv(d: Diagram, path) -> None:
    """CSV export: header s,t,value; one row per triangle cell, rows ascending."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("s,t,value\n")
        for _i, _j, s, t, value in d.iter_cells():
            fh.write(f"{s:.17g},{t:.17g},{value}\n")


def analytic_baric_set(kind: str, lam: float | None = None, c: float | None = None) -> dict:
    """Closed-form description of the off-diagonal baric set for catalog controllers."""
    kind = kind.lower()
    if kind == "tan":
        return {
            "kind": "tan",
            "curves": ["s = t - pi*k for k = 0, 1, 2, ..."],
            "description": "lines parallel to the diagonal at spacing pi",
        }
    if kind == "sin":
        return {
            "kind": "sin",
            "curves": ["t = s + 2*pi*k", "t = -s + (2*k+1)*pi"],
            "description": "diagonal translates plus antidiagonal reflections",
        }
    if kind == "const":
        return {
            "kind": "const",
            "curves": ["0 <= s <= t"],
            "description": "the whole triangle (theta constant, every pair matches)",
        }
    if kind == "explinear":
        if lam is None or c is None:
            raise InputError("explinear description requires lam and c")
        crit = critical_times_p1(lam, c)
        out = {
            "kind": "explinear",
            "lambda": float(lam),
            "c": float(c),
            "case": crit.case,
        }
        if crit.empty:
            out["curves"] = []
            out["description"] = "diagonal only (theta is one-to-one)"
        else:
            out["t_c"] = crit.t_c
            out["t_c_prime"] = crit.t_c_prime
            out["curves"] = ["theta(s) = theta(t) with s <= t_c <= t <= t_c_prime"]
            out["description"] = "one matching curve around the theta minimum"
        return out
    raise InputError(f"unsupported controller kind {kind!r}; expected tan, sin, const, or explinear")
