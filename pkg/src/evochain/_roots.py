"""Grid-seeded damped Newton refinement with deterministic deduplication.

Shared engine for the numeric oracles: both the absolute-nilpotent and the
idempotent searches reduce to "refine every point of a cartesian grid against
a square residual system, keep the converged points, collapse near-duplicates,
return them lexicographically sorted".  Everything here is batched over the
full grid; nothing depends on iteration order, so results are reproducible
bit for bit.
"""

from __future__ import annotations

from itertools import product

import numpy as np

_DAMPING_HALVINGS = 25
_DIVERGENCE_BOUND = 1e6


def grid_points(n: int, radius: float, step: float) -> np.ndarray:
    """Cartesian grid over [-radius, radius]^n with the given spacing, (G, n)."""
    count = int(round(2.0 * radius / step)) + 1
    axis = -radius + step * np.arange(count)
    grids = np.meshgrid(*([axis] * n), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def _residual(f, x):
    return np.max(np.abs(f(x)), axis=1)


def _solve_step(jac, fval):
    # Ridge-regularized normal equations keep the batched solve defined even
    # at singular Jacobians (the step just shrinks toward zero there).
    jt = np.swapaxes(jac, 1, 2)
    a = jt @ jac
    b = -(jt @ fval[..., None])[..., 0]
    scale = np.maximum(np.abs(a).sum(axis=(1, 2)), 1.0)
    n = jac.shape[1]
    a = a + (1e-12 * scale)[:, None, None] * np.eye(n)
    return np.linalg.solve(a, b[..., None])[..., 0]


def refine(f, jac, starts: np.ndarray, tol: float, max_iter: int = 50) -> np.ndarray:
    """Newton-refine a batch of starts; returns the rows that converged.

    `f` maps (B, n) -> (B, n) residuals and `jac` maps (B, n) -> (B, n, n).
    Steps that fail to reduce the max-norm residual are halved up to a cap;
    points that cannot improve at all are finalized where they stand, and
    points past a divergence bound are dropped.  Refinement continues below
    `tol` toward machine level: at multiple roots the residual is a high
    power of the distance, and stopping right at `tol` would leave a cloud
    of distinct near-roots where exact arithmetic has one point.
    """
    x = np.array(starts, dtype=float)
    if x.ndim != 2:
        raise ValueError("starts must be a 2-d array of points")
    polish = min(tol, 1e-12)
    active = np.ones(len(x), dtype=bool)
    res = _residual(f, x)
    for _ in range(max_iter):
        work = active & (res > polish)
        if not work.any():
            break
        xi = x[work]
        fi = f(xi)
        cur = np.max(np.abs(fi), axis=1)
        delta = _solve_step(jac(xi), fi)
        scale = np.ones(len(xi))
        xn = xi + delta
        rn = _residual(f, xn)
        for _h in range(_DAMPING_HALVINGS):
            bad = ~(rn < cur) & (scale > 1e-7)
            if not bad.any():
                break
            scale[bad] *= 0.5
            xn[bad] = xi[bad] + scale[bad, None] * delta[bad]
            rn[bad] = _residual(f, xn[bad])
        stuck = ~(rn < cur)
        xn[stuck] = xi[stuck]
        rn[stuck] = cur[stuck]
        diverged = np.max(np.abs(xn), axis=1) > _DIVERGENCE_BOUND
        rn[diverged] = np.inf
        x[work] = xn
        res[work] = rn
        still = active[work]
        still[stuck] = False
        still[diverged] = False
        active[work] = still
    return x[res <= tol]


def _gauss_solve(a: np.ndarray, b: np.ndarray):
    """Pivoted Gaussian elimination in the arrays' own dtype (LAPACK-free).

    np.linalg.solve downcasts to double; the polish stage below needs the
    solve carried out in extended precision.
    """
    a = a.copy()
    b = b.copy()
    n = len(b)
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if a[p, k] == 0:
            return None
        if p != k:
            a[[k, p]] = a[[p, k]]
            b[[k, p]] = b[[p, k]]
        for r in range(k + 1, n):
            m = a[r, k] / a[k, k]
            a[r, k:] -= m * a[k, k:]
            b[r] -= m * b[k]
    x = np.zeros(n, dtype=a.dtype)
    for k in range(n - 1, -1, -1):
        x[k] = (b[k] - a[k, k + 1 :] @ x[k + 1 :]) / a[k, k]
    return x


def polish_roots(f, jac, pts: np.ndarray, max_iter: int = 40) -> np.ndarray:
    """Extended-precision Newton polish of already-found near-roots.

    Double precision cannot pin down roots of multiplicity > 1: the residual
    noise floor (~1e-16) leaves a cloud of indistinguishable near-roots of
    diameter well above the dedup radius.  Working in longdouble lowers that
    floor enough for the cloud to collapse onto one representative.  `f` and
    `jac` must preserve the dtype of their input.
    """
    pts = np.asarray(pts)
    if len(pts) == 0:
        return pts
    out = np.empty((len(pts), pts.shape[1]), dtype=float)
    eye = np.eye(pts.shape[1], dtype=np.longdouble)
    for k, p in enumerate(pts):
        x = p.astype(np.longdouble)
        res = np.max(np.abs(f(x[None, :])[0]))
        for _ in range(max_iter):
            fv = f(x[None, :])[0]
            jv = jac(x[None, :])[0]
            # Direct solve: at a multiple root the Jacobian's small singular
            # value IS the signal, and a ridge would swamp it.
            step = _gauss_solve(jv, -fv)
            if step is None:
                jt = jv.T
                a = jt @ jv
                ridge = np.longdouble(1e-18) * max(float(np.abs(a).sum()), 1.0)
                step = _gauss_solve(a + ridge * eye, -(jt @ fv))
                if step is None:
                    break
            scale = np.longdouble(1.0)
            improved = False
            for _h in range(64):
                xn = x + scale * step
                rn = np.max(np.abs(f(xn[None, :])[0]))
                if rn < res:
                    x, res, improved = xn, rn, True
                    break
                scale *= np.longdouble(0.5)
            if not improved:
                break
        out[k] = x.astype(float)
    return out


def collapse_clusters(points: np.ndarray, f, link_radius: float) -> np.ndarray:
    """Merge single-linkage clusters, keeping each cluster's best point.

    Meant for oracles whose true root set is finite.  Around a root of
    multiplicity > 1 the residual stays under any tolerance on a valley much
    wider than the dedup radius, so dedup leaves several survivors where
    exact arithmetic has one root; those survivors sit within a couple of
    dedup radii of each other.  Chains of points closer than `link_radius`
    collapse to the member with the smallest residual (the best estimate of
    the underlying root).  Do not use on continuum root sets: linking would
    swallow the whole curve.
    """
    points = np.asarray(points, dtype=float)
    if len(points) <= 1:
        return points
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if np.max(np.abs(points[i] - points[j])) <= link_radius:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)

    res = np.max(np.abs(f(points)), axis=1)
    best: dict[int, int] = {}
    for i in range(n):
        r = find(i)
        if r not in best or res[i] < res[best[r]]:
            best[r] = i
    keep = sorted(best.values())
    out = points[keep]
    return out[np.lexsort(out.T[::-1])]


def points_match(a: np.ndarray, b: np.ndarray, radius: float = 1e-4) -> bool:
    """Set equality at the given resolution: equal counts, one-to-one pairing.

    Row order is deliberately ignored; lexicographic order is unstable when
    a coordinate sits within noise of a tie (e.g. -1e-13 vs exact 0).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if len(a) != len(b):
        return False
    if len(a) == 0:
        return True
    used = np.zeros(len(b), dtype=bool)
    for p in a:
        d = np.max(np.abs(b - p), axis=1)
        d[used] = np.inf
        j = int(np.argmin(d))
        if d[j] > radius:
            return False
        used[j] = True
    return True


def dedup(points: np.ndarray, radius: float) -> np.ndarray:
    """Collapse points closer than `radius` (max-norm), keeping exact values.

    Output is lexicographically sorted; within a duplicate cluster the
    lexicographically smallest representative survives.  A coarse integer-cell
    pass removes the bulk, then a spatial-hash sweep over the 3^n neighbor
    cells catches duplicates straddling cell borders.
    """
    points = np.asarray(points, dtype=float)
    if len(points) == 0:
        return points.reshape(0, points.shape[1] if points.ndim == 2 else 0)
    n = points.shape[1]
    order = np.lexsort(points.T[::-1])
    pts = points[order]

    cells = np.floor(pts / radius + 0.5).astype(np.int64)
    _, first = np.unique(cells, axis=0, return_index=True)
    first.sort()
    pts = pts[first]

    offsets = [np.array(o, dtype=np.int64) for o in product((-1, 0, 1), repeat=n)]
    kept: list[np.ndarray] = []
    buckets: dict[tuple, list[np.ndarray]] = {}
    for p in pts:
        cell = np.floor(p / radius + 0.5).astype(np.int64)
        dup = False
        for off in offsets:
            for q in buckets.get(tuple(cell + off), ()):
                if np.max(np.abs(p - q)) <= radius:
                    dup = True
                    break
            if dup:
                break
        if not dup:
            kept.append(p)
            buckets.setdefault(tuple(cell), []).append(p)
    return np.array(kept)
