"""Chains of evolution algebras.

A chain is a two-parameter family of structure matrices M[s,t], 0 <= s <= t,
satisfying the Chapman-Kolmogorov equation M[s,t] = M[s,tau] M[tau,t] for
every s < tau < t.  This module provides a catalog of built-in families,
seeded statistical checks (Chapman-Kolmogorov, homogeneity, periodicity),
limit classification for the two-parameter exponential family, and
determinants.

Time-dependent scalar coefficients are drawn from a small TimeFunction
catalog so that families are serializable and runs are reproducible; library
callers may also supply arbitrary evaluator callbacks via `from_callable`.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.linalg import expm, logm, solve_triangular

from .algebra import EvolutionAlgebra, matrix_distance
from .errors import EvaluationDomainError, InputError

_TF_KINDS = ("exp", "linear", "power", "sin", "cos", "tan", "const", "piecewise_const")


@dataclass(frozen=True)
class TimeFunction:
    """A scalar function of time from the serializable catalog.

    Kinds: exp (lam**t, lam > 0), linear (c*t), sin, cos, tan, const (c),
    piecewise_const (right-open steps), and power (a matrix B; only
    meaningful as a triangular-family entry, never called as a scalar).
    """

    kind: str
    params: tuple = ()

    def __post_init__(self):
        if self.kind not in _TF_KINDS:
            raise InputError(f"unknown time function kind {self.kind!r}")

    @classmethod
    def exp(cls, lam: float) -> "TimeFunction":
        if lam <= 0:
            raise InputError(f"exp time function requires lam > 0, got {lam}")
        return cls("exp", (float(lam),))

    @classmethod
    def linear(cls, c: float) -> "TimeFunction":
        return cls("linear", (float(c),))

    @classmethod
    def sin(cls) -> "TimeFunction":
        return cls("sin")

    @classmethod
    def cos(cls) -> "TimeFunction":
        return cls("cos")

    @classmethod
    def tan(cls) -> "TimeFunction":
        return cls("tan")

    @classmethod
    def const(cls, c: float) -> "TimeFunction":
        return cls("const", (float(c),))

    @classmethod
    def piecewise_const(cls, breakpoints, values) -> "TimeFunction":
        bp = tuple(float(b) for b in breakpoints)
        vals = tuple(float(v) for v in values)
        if any(b2 <= b1 for b1, b2 in zip(bp, bp[1:])):
            raise InputError("piecewise_const breakpoints must be strictly increasing")
        if len(vals) != len(bp) + 1:
            raise InputError(
                f"piecewise_const needs {len(bp) + 1} values for {len(bp)} breakpoints, got {len(vals)}"
            )
        return cls("piecewise_const", (bp, vals))

    @classmethod
    def power(cls, matrix) -> "TimeFunction":
        b = np.asarray(matrix, dtype=float)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise InputError("power time function requires a square matrix")
        return cls("power", (tuple(map(tuple, b)),))

    def __call__(self, t: float) -> float:
        if self.kind == "exp":
            return self.params[0] ** t
        if self.kind == "linear":
            return self.params[0] * t
        if self.kind == "sin":
            return math.sin(t)
        if self.kind == "cos":
            return math.cos(t)
        if self.kind == "tan":
            c = math.cos(t)
            if abs(c) < 1e-12:
                raise EvaluationDomainError(f"tan undefined at t = {t} (pole)")
            return math.sin(t) / c
        if self.kind == "const":
            return self.params[0]
        if self.kind == "piecewise_const":
            bp, vals = self.params
            return vals[bisect_right(bp, t)]
        raise InputError("power time function is matrix-valued; usable only in a triangular family")

    @property
    def nonvanishing(self) -> bool:
        """True when the function provably has no zero for any t >= 0."""
        if self.kind == "exp":
            return True
        if self.kind == "const":
            return self.params[0] != 0.0
        if self.kind == "piecewise_const":
            return all(v != 0.0 for v in self.params[1])
        return False

    def poles_in(self, lo: float, hi: float) -> list[float]:
        """Poles (tan only) inside the open interval (lo, hi)."""
        if self.kind != "tan":
            return []
        out = []
        k = math.floor((lo - math.pi / 2) / math.pi) + 1
        while math.pi / 2 + k * math.pi < hi:
            p = math.pi / 2 + k * math.pi
            if p > lo:
                out.append(p)
            k += 1
        return out

    def to_dict(self) -> dict:
        if self.kind == "exp":
            return {"kind": "exp", "lam": self.params[0]}
        if self.kind == "linear":
            return {"kind": "linear", "c": self.params[0]}
        if self.kind == "const":
            return {"kind": "const", "c": self.params[0]}
        if self.kind == "piecewise_const":
            bp, vals = self.params
            return {"kind": "piecewise_const", "breakpoints": list(bp), "values": list(vals)}
        if self.kind == "power":
            return {"kind": "power", "matrix": [list(r) for r in self.params[0]]}
        return {"kind": self.kind}

    @classmethod
    def from_dict(cls, d: dict) -> "TimeFunction":
        kind = d.get("kind")
        if kind == "exp":
            return cls.exp(d["lam"])
        if kind == "linear":
            return cls.linear(d["c"])
        if kind == "const":
            return cls.const(d["c"])
        if kind == "piecewise_const":
            return cls.piecewise_const(d["breakpoints"], d["values"])
        if kind == "power":
            return cls.power(d["matrix"])
        if kind in ("sin", "cos", "tan"):
            return cls(kind)
        raise InputError(f"unknown time function kind {kind!r}")

    @classmethod
    def parse(cls, text: str) -> "TimeFunction":
        """Parse the CLI mini-syntax: exp:2, linear:0.5, const:1, sin, cos, tan."""
        name, _, arg = text.partition(":")
        name = name.strip().lower()
        if name in ("sin", "cos", "tan"):
            if arg:
                raise InputError(f"time function {name} takes no parameter, got {text!r}")
            return cls(name)
        if name in ("exp", "linear", "const"):
            try:
                val = float(arg)
            except ValueError:
                raise InputError(f"time function {text!r}: expected {name}:NUMBER") from None
            return {"exp": cls.exp, "linear": cls.linear, "const": cls.const}[name](val)
        raise InputError(f"cannot parse time function {text!r}")


class LimitClass(Enum):
    E0 = "e0"
    E1 = "e1"
    E_HALF = "e_half"
    E_MINUS_HALF = "e_minus_half"
    E_INFINITY = "e_infinity"


#: Limit structure matrices for the finite limit classes.
LIMIT_MATRICES: dict[LimitClass, np.ndarray] = {
    LimitClass.E0: np.zeros((2, 2)),
    LimitClass.E1: np.eye(2),
    LimitClass.E_HALF: np.full((2, 2), 0.5),
    LimitClass.E_MINUS_HALF: np.array([[0.5, -0.5], [-0.5, 0.5]]),
}


@dataclass(frozen=True)
class CKReport:
    n_samples: int
    seed: int
    tol: float
    max_residual: float
    worst_triple: tuple[float, float, float]
    passed: bool


@dataclass(frozen=True)
class ChainFamily:
    """A chain family: an evaluator (s, t) -> structure matrix plus metadata."""

    variant: str
    params: dict = field(compare=False)
    n: int = 2
    evaluator: object = field(default=None, compare=False, repr=False)
    declared_homogeneous: bool | None = None
    declared_period: float | None = None
    breakpoints: tuple = ()

    def matrix(self, s: float, t: float) -> np.ndarray:
        if not (0 <= s <= t):
            raise InputError(f"need 0 <= s <= t, got s={s}, t={t}")
        return self.evaluator(s, t)

    def snapshot(self, s: float, t: float) -> EvolutionAlgebra:
        return EvolutionAlgebra(self.matrix(s, t))

    def poles_in(self, lo: float, hi: float) -> list[float]:
        out = set()
        for v in self.params.values():
            if isinstance(v, TimeFunction):
                out.update(v.poles_in(lo, hi))
        return sorted(out)

    def to_dict(self) -> dict:
        def enc(v):
            if isinstance(v, TimeFunction):
                return v.to_dict()
            if isinstance(v, (list, tuple)):
                return [enc(x) for x in v]
            return v

        return {"variant": self.variant, "params": {k: enc(v) for k, v in self.params.items()}}


def snapshot(family: ChainFamily, s: float, t: float) -> EvolutionAlgebra:
    return family.snapshot(s, t)


def example1(A: float) -> ChainFamily:
    """Three-state Markov-generated homogeneous family.

    Row i of the matrix holds e_i^2; all rows sum to 1 for every elapsed
    time, and the matrices converge to the constant-1/3 matrix.
    """
    if A <= 0:
        raise InputError(f"example1 requires A > 0, got {A}")
    A = float(A)
    alpha = math.sqrt(3.0) / 2.0 * A

    def ev(s, t):
        tau = t - s
        damp = math.exp(-1.5 * A * tau)
        c, si = math.cos(alpha * tau), math.sin(alpha * tau)
        d = (2.0 / 3.0) * damp * c + 1.0 / 3.0
        p = damp * (si / math.sqrt(3.0) - c / 3.0) + 1.0 / 3.0
        q = -damp * (si / math.sqrt(3.0) + c / 3.0) + 1.0 / 3.0
        return np.array([[d, p, q], [q, d, p], [p, q, d]])

    return ChainFamily("example1", {"A": A}, n=3, evaluator=ev, declared_homogeneous=True)


def example2(lam: float, mu: float) -> ChainFamily:
    """Two-dimensional homogeneous family with entries built from lam**t, mu**t."""
    if lam <= 0 or mu <= 0:
        raise InputError(f"example2 requires lambda, mu > 0, got ({lam}, {mu})")
    lam, mu = float(lam), float(mu)

    def ev(s, t):
        tau = t - s
        a = (lam**tau + mu**tau) / 2.0
        b = (lam**tau - mu**tau) / 2.0
        return np.array([[a, b], [b, a]])

    return ChainFamily("example2", {"lambda": lam, "mu": mu}, n=2, evaluator=ev, declared_homogeneous=True)


def _two_state_matrix(alpha: float, beta: float) -> np.ndarray:
    return 0.5 * np.array(
        [[1 + alpha + beta, 1 - alpha - beta], [1 + alpha - beta, 1 - alpha + beta]]
    )


def two_state(phi: TimeFunction, psi: TimeFunction) -> ChainFamily:
    """Two-state family driven by a nonvanishing Phi and an arbitrary Psi.

    Entries are 0.5*(1 +- alpha +- beta) with beta(s,t) = Phi(t)/Phi(s) and
    alpha(s,t) = Phi(t)*(Psi(t) - Psi(s)).
    """
    if not phi.nonvanishing:
        raise InputError(
            "two_state requires a nonvanishing phi (exp, nonzero const, or all-nonzero piecewise_const)"
        )

    def ev(s, t):
        ps, pt = phi(s), phi(t)
        alpha = pt * (psi(t) - psi(s))
        beta = pt / ps
        return _two_state_matrix(alpha, beta)

    return ChainFamily("two_state", {"phi": phi, "psi": psi}, n=2, evaluator=ev)


def theorem5(psi: TimeFunction, g: TimeFunction) -> ChainFamily:
    """Two-state family whose determinant drops from 1 to 0 at t = 1.

    For t < 1 it follows the two-state form with beta = 1 and
    alpha = psi(t) - psi(s); from t = 1 on, beta = 0 and alpha = g(t), which
    collapses the matrix to rank one.
    """

    def ev(s, t):
        if t < 1.0:
            return _two_state_matrix(psi(t) - psi(s), 1.0)
        return _two_state_matrix(g(t), 0.0)

    return ChainFamily(
        "theorem5", {"psi": psi, "g": g}, n=2, evaluator=ev, breakpoints=(1.0,)
    )


def rotation() -> ChainFamily:
    """Rotation-matrix family; homogeneous and periodic with period 2*pi."""

    def ev(s, t):
        tau = t - s
        c, si = math.cos(tau), math.sin(tau)
        return np.array([[c, si], [-si, c]])

    return ChainFamily(
        "rotation", {}, n=2, evaluator=ev, declared_homogeneous=True, declared_period=2 * math.pi
    )


def constant_row(phi: TimeFunction, n: int) -> ChainFamily:
    """Rank-one family: e_1^2 = (Phi(s)/Phi(t)) * (e_1 + ... + e_n), e_i^2 = 0 else.

    The first row is constant and the remaining rows vanish, so the elements
    (0, x_2, ..., x_n) are exactly the absolute nilpotents of every snapshot.
    """
    n = int(n)
    if n < 2:
        raise InputError(f"constant_row requires n >= 2, got {n}")
    if not phi.nonvanishing:
        raise InputError(
            "constant_row requires a nonvanishing phi (exp, nonzero const, or all-nonzero piecewise_const)"
        )

    def ev(s, t):
        m = np.zeros((n, n))
        m[0, :] = phi(s) / phi(t)
        return m

    return ChainFamily("constant_row", {"phi": phi, "n": n}, n=n, evaluator=ev)


def _tf_entry_grid(entries) -> list[list[TimeFunction]]:
    grid = []
    for i, row in enumerate(entries):
        row = list(row)
        if len(row) != i + 1:
            raise InputError(
                f"triangular entries row {i} must have {i + 1} entries, got {len(row)}"
            )
        for j, tf in enumerate(row):
            if not isinstance(tf, TimeFunction):
                raise InputError(f"triangular entry ({i},{j}) is not a TimeFunction")
            if i == j and not tf.nonvanishing:
                raise InputError(
                    f"triangular diagonal entry ({i},{i}) must be nonvanishing "
                    "(exp, nonzero const, or all-nonzero piecewise_const)"
                )
        grid.append(row)
    return grid


def triangular(entries=None, power=None) -> ChainFamily:
    """Lower-triangular family M[s,t] = A[s] * inverse(A[t]).

    Either `entries` gives the lower triangle of A[t] as TimeFunctions (row i
    holds i+1 entries, diagonal nonvanishing), or `power` gives a constant
    invertible lower-triangular matrix B with positive diagonal and
    A[t] = B**t.  Inverses are applied via triangular solves, never general
    inversion.
    """
    if (entries is None) == (power is None):
        raise InputError("triangular requires exactly one of entries= or power=")
    if power is not None:
        if isinstance(power, TimeFunction):
            if power.kind != "power":
                raise InputError("triangular power= expects a power time function or a matrix")
            power = power.params[0]
        b = np.asarray(power, dtype=float)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise InputError("triangular power matrix must be square")
        if np.max(np.abs(np.triu(b, 1))) > 0:
            raise InputError("triangular power matrix must be lower-triangular")
        if np.min(np.diag(b)) <= 0:
            raise InputError("triangular power matrix needs positive diagonal entries")
        n = b.shape[0]
        log_b = logm(b)
        log_b = np.real_if_close(log_b, tol=1000)
        if np.iscomplexobj(log_b):
            raise InputError("triangular power matrix has no real logarithm")

        def a_of(t):
            return expm(t * log_b)

        params = {"power": TimeFunction.power(b)}
        homogeneous = True
    else:
        grid = _tf_entry_grid(entries)
        n = len(grid)

        def a_of(t):
            m = np.zeros((n, n))
            for i, row in enumerate(grid):
                for j, tf in enumerate(row):
                    m[i, j] = tf(t)
            return m

        params = {"entries": grid}
        homogeneous = None

    def ev(s, t):
        a_t = a_of(t)
        d = np.abs(np.diag(a_t))
        if np.min(d) <= 1e-300:
            raise EvaluationDomainError(f"triangular A[t] singular at t = {t}")
        # M = A[s] inv(A[t]); transpose turns the right-inverse into one
        # upper-triangular solve.
        return solve_triangular(a_t.T, a_of(s).T, lower=False).T

    return ChainFamily(
        "triangular", params, n=n, evaluator=ev, declared_homogeneous=homogeneous
    )


def from_callable(
    n: int,
    fn,
    *,
    homogeneous: bool | None = None,
    period: float | None = None,
    breakpoints: tuple = (),
) -> ChainFamily:
    """Wrap an arbitrary evaluator (s, t) -> matrix as a chain family."""

    def ev(s, t):
        return np.asarray(fn(s, t), dtype=float)

    return ChainFamily(
        "callable",
        {},
        n=int(n),
        evaluator=ev,
        declared_homogeneous=homogeneous,
        declared_period=period,
        breakpoints=tuple(breakpoints),
    )


_VARIANTS = ("example1", "example2", "two_state", "triangular", "rotation", "constant_row", "theorem5")


def build_family(spec: dict) -> ChainFamily:
    """Build a family from its wire form {"variant": ..., "params": {...}}."""
    if not isinstance(spec, dict) or "variant" not in spec:
        raise InputError('family spec must be a dict with a "variant" key')
    variant = spec["variant"]
    params = spec.get("params", {}) or {}
    if variant not in _VARIANTS:
        raise InputError(f"unknown family variant {variant!r}; expected one of {_VARIANTS}")

    def tf(key):
        if key not in params:
            raise InputError(f"family {variant!r} requires param {key!r}")
        v = params[key]
        return v if isinstance(v, TimeFunction) else TimeFunction.from_dict(v)

    if variant == "example1":
        if "A" not in params:
            raise InputError('family "example1" requires param "A"')
        return example1(params["A"])
    if variant == "example2":
        for k in ("lambda", "mu"):
            if k not in params:
                raise InputError(f'family "example2" requires param {k!r}')
        return example2(params["lambda"], params["mu"])
    if variant == "two_state":
        return two_state(tf("phi"), tf("psi"))
    if variant == "rotation":
        return rotation()
    if variant == "constant_row":
        if "n" not in params:
            raise InputError('family "constant_row" requires param "n"')
        return constant_row(tf("phi"), params["n"])
    if variant == "theorem5":
        return theorem5(tf("psi"), tf("g"))
    # triangular
    if "power" in params:
        p = params["power"]
        if isinstance(p, dict):
            p = TimeFunction.from_dict(p)
        return triangular(power=p)
    if "entries" in params:
        grid = []
        for row in params["entries"]:
            grid.append([e if isinstance(e, TimeFunction) else TimeFunction.from_dict(e) for e in row])
        return triangular(entries=grid)
    raise InputError('family "triangular" requires param "entries" or "power"')


def verify_ck(family: ChainFamily, t_max: float, n_samples: int, seed: int, tol: float) -> CKReport:
    """Check the Chapman-Kolmogorov identity on seeded sorted triples.

    Triples s < tau < t are drawn uniformly from [0, t_max].  When the family
    declares breakpoints inside the window, at least a quarter of the triples
    straddle one (s below, t at-or-above), since violations concentrate
    there.
    """
    if t_max <= 0:
        raise InputError(f"t_max must be positive, got {t_max}")
    if n_samples < 1:
        raise InputError(f"n_samples must be >= 1, got {n_samples}")
    rng = np.random.default_rng(seed)
    bps = [b for b in family.breakpoints if 0 < b < t_max]
    triples = []
    if bps:
        want = (n_samples + 3) // 4
        k = 0
        while len(triples) < want:
            b = bps[k % len(bps)]
            k += 1
            s = rng.uniform(0.0, b)
            t = rng.uniform(b, t_max)
            tau = rng.uniform(s, t)
            if s < tau < t:
                triples.append((s, tau, t))
    while len(triples) < n_samples:
        u = np.sort(rng.uniform(0.0, t_max, 3))
        if u[0] < u[1] < u[2]:
            triples.append((float(u[0]), float(u[1]), float(u[2])))

    worst = -1.0
    worst_triple = triples[0]
    for s, tau, t in triples:
        try:
            resid = matrix_distance(family.matrix(s, t), family.matrix(s, tau) @ family.matrix(tau, t))
        except EvaluationDomainError as exc:
            raise EvaluationDomainError(f"evaluator failed on triple ({s}, {tau}, {t}): {exc}") from exc
        if resid > worst or (resid == worst and (s, tau, t) < worst_triple):
            worst = resid
            worst_triple = (s, tau, t)
    return CKReport(
        n_samples=n_samples,
        seed=seed,
        tol=tol,
        max_residual=worst,
        worst_triple=worst_triple,
        passed=bool(worst <= tol),
    )


def check_homogeneous(family: ChainFamily, t_max: float, n_samples: int, seed: int, tol: float) -> bool:
    """True when shifting (s, t) by a common offset leaves the matrix fixed."""
    rng = np.random.default_rng(seed)
    for _ in range(n_samples):
        delta = rng.uniform(0.0, t_max)
        s1 = rng.uniform(0.0, t_max - delta)
        s2 = rng.uniform(0.0, t_max - delta)
        if matrix_distance(family.matrix(s1, s1 + delta), family.matrix(s2, s2 + delta)) > tol:
            return False
    return True


def check_period(family: ChainFamily, period: float, t_max: float, n_samples: int, seed: int, tol: float) -> bool:
    """True when M[s, t + period] = M[s, t] on seeded samples."""
    if period == 0:
        raise InputError("period must be nonzero")
    rng = np.random.default_rng(seed)
    done = 0
    while done < n_samples:
        u = np.sort(rng.uniform(0.0, t_max, 2))
        s, t = float(u[0]), float(u[1])
        if t + period < s:
            continue
        if matrix_distance(family.matrix(s, t + period), family.matrix(s, t)) > tol:
            return False
        done += 1
    return True


def limit_classify_example2(lam: float, mu: float) -> LimitClass:
    """Classify the large-time limit of the example2 family.

    E0 for both parameters below 1, E1 at (1,1), E_HALF for lam = 1 with
    mu < 1, E_MINUS_HALF for mu = 1 with lam < 1, and E_INFINITY otherwise
    (entries unbounded).  Finite limit matrices live in LIMIT_MATRICES.
    """
    if lam <= 0 or mu <= 0:
        raise InputError(f"limit classification requires lambda, mu > 0, got ({lam}, {mu})")
    if lam == 1.0 and mu == 1.0:
        return LimitClass.E1
    if 0 < lam < 1 and 0 < mu < 1:
        return LimitClass.E0
    if lam == 1.0 and 0 < mu < 1:
        return LimitClass.E_HALF
    if mu == 1.0 and 0 < lam < 1:
        return LimitClass.E_MINUS_HALF
    return LimitClass.E_INFINITY


def numeric_limit(family: ChainFamily, s: float, t_probe: float, divergence_bound: float = 1e12):
    """Probe M[s, t_probe]; None signals divergence past the bound."""
    if t_probe < s:
        raise InputError(f"t_probe must be >= s, got s={s}, t_probe={t_probe}")
    m = family.matrix(s, t_probe)
    if np.max(np.abs(m)) > divergence_bound:
        return None
    return m


def chain_det(family: ChainFamily, s: float, t: float) -> float:
    return float(np.linalg.det(family.matrix(s, t)))
