"""Lorenz curve machinery.

The Lorenz value at p is the normalized quantile integral
``L(p) = (1/m) * integral of Q over [0, p]``. For finite-discrete sources the
curve is piecewise affine with vertices at the cumulative weights and is
evaluated exactly by interpolation. For everything else, batched evaluation
runs one sweep over the support: writing S(p) for the quantile integral,

    S(p') - S(p) = (p' - p) Q(p) + integral over [Q(p), Q(p')] of (p' - F(x)) dx,

which follows from Fubini plus the Galois inequalities, so a sorted batch of
probabilities costs one vectorized quantile call and one pass of cell
quadrature between consecutive quantile values.

Also here: the pseudo-Lorenz functional, Kendall points, the domination
predicate, and the inverse map from a convex curve plus a mean back to a
distribution (mass target_mean times the left derivative, pushed forward from
the unit interval).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .measures import Distribution, QuantileTable, quantile_table, require_member
from .quadrature import cell_integrals, integrate

__all__ = [
    "LorenzCurve",
    "lorenz",
    "pseudo_lorenz",
    "kendall_points",
    "lorenz_dominates",
    "reconstruct",
    "integral_lorenz",
]

_P_TAIL = 1.0 - 2.0**-40


@dataclass(frozen=True)
class LorenzCurve:
    """Evaluable Lorenz curve tied to its source distribution.

    Attributes
    ----------
    source:
        The distribution the curve was built from.
    source_mean:
        Its mean (positive; membership is checked on construction).
    representation:
        "exact-piecewise-affine" when the source is finite-discrete, in which
        case evaluation interpolates the stored vertices; "quadrature-backed"
        otherwise.
    """

    source: Distribution = field(repr=False)
    source_mean: float
    representation: str

    @cached_property
    def _vertices(self):
        if self.representation != "exact-piecewise-affine":
            return None
        support, weights = self.source.support_atoms()
        ps = np.concatenate([[0.0], np.cumsum(weights)])
        ps[-1] = 1.0
        ls = np.concatenate([[0.0], np.cumsum(weights * support)]) / self.source_mean
        ls[-1] = 1.0
        return ps, ls

    def _eval_sorted(self, p: np.ndarray) -> np.ndarray:
        """Values at a sorted, validated probability array."""
        if self._vertices is not None:
            ps, ls = self._vertices
            return np.interp(p, ps, ls)
        d = self.source
        out = np.empty_like(p)
        inner = p < 1.0
        out[~inner] = 1.0
        pin = p[inner]
        if pin.size == 0:
            return out
        q = d._quantile_arr(pin)
        s0 = d.integral_quantile(float(pin[0]))
        if pin.size > 1:
            xb = d.x_breakpoints()
            cuts = xb[(xb > q[0]) & (xb < q[-1])]
            edges = np.unique(np.concatenate([q, cuts]))
            neg_f = cell_integrals(lambda x: -d._cdf_arr(x), edges, tol=1e-11)
            owner = np.searchsorted(q, edges[:-1], side="right") - 1
            cell_f = np.zeros(pin.size - 1)
            np.add.at(cell_f, owner, neg_f)
            inc = (
                np.diff(pin) * q[:-1]
                + pin[1:] * np.diff(q)
                + cell_f
            )
            s = s0 + np.concatenate([[0.0], np.cumsum(inc)])
        else:
            s = np.asarray([s0])
        out[inner] = s / self.source_mean
        return np.clip(out, 0.0, 1.0)

    def eval(self, p) -> float | np.ndarray:
        """L(p) for p in [0, 1], scalar or array, any order."""
        arr = np.asarray(p, dtype=float)
        if np.any(arr < 0.0) or np.any(arr > 1.0) or not np.all(np.isfinite(arr)):
            raise ValueError("Lorenz curve is defined on [0, 1]")
        flat = arr.ravel()
        order = np.argsort(flat, kind="stable")
        vals = np.empty_like(flat)
        vals[order] = self._eval_sorted(flat[order])
        out = vals.reshape(arr.shape)
        return float(out) if np.isscalar(p) or arr.ndim == 0 else out

    __call__ = eval

    def _batch_for_quad(self, p: np.ndarray) -> np.ndarray:
        """Clipped unvalidated array evaluation, for use as a quadrature integrand."""
        flat = np.clip(np.asarray(p, dtype=float).ravel(), 0.0, 1.0)
        order = np.argsort(flat, kind="stable")
        vals = np.empty_like(flat)
        vals[order] = self._eval_sorted(flat[order])
        return vals.reshape(np.shape(p))

    def left_derivative(self, p) -> float | np.ndarray:
        """Left derivative of the curve: Q(p) / mean on (0, 1].

        At p = 1 this is the supremum of the support over the mean, which is
        inf for unbounded sources.
        """
        arr = np.asarray(p, dtype=float)
        if np.any(arr <= 0.0) or np.any(arr > 1.0):
            raise ValueError("left derivative is defined on (0, 1]")
        out = np.empty_like(arr)
        top = arr == 1.0
        out[top] = self.source.sup_support() / self.source_mean
        out[~top] = self.source._quantile_arr(arr[~top]) / self.source_mean
        return float(out) if np.isscalar(p) or arr.ndim == 0 else out


def lorenz(d: Distribution) -> LorenzCurve:
    """Lorenz curve of a distribution with finite nonzero mean."""
    require_member(d)
    rep = "exact-piecewise-affine" if d.is_finite_discrete else "quadrature-backed"
    return LorenzCurve(source=d, source_mean=d.mean, representation=rep)


def pseudo_lorenz(d: Distribution, p) -> float | np.ndarray:
    """Share owned below the p-quantile, atom at Q(p) included.

    Defined as the partial expectation up to Q(p), normalized by the mean,
    with the value at p = 1 fixed to 1. Jumps exactly where the quantile
    jumps; sits above the Lorenz curve elsewhere.
    """
    require_member(d)
    arr = np.asarray(p, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0) or not np.all(np.isfinite(arr)):
        raise ValueError("pseudo-Lorenz is defined on [0, 1]")
    out = np.ones_like(arr)
    inner = arr < 1.0
    q = d._quantile_arr(arr[inner])
    out[inner] = np.asarray(d.partial_expectation(q)) / d.mean
    out = np.clip(out, 0.0, 1.0)
    return float(out) if np.isscalar(p) or arr.ndim == 0 else out


def kendall_points(d: Distribution, t_grid) -> list[tuple[float, float]]:
    """Parametric curve points (F(t), partial expectation(t) / mean).

    Every point lies on the Lorenz graph; the curve skips the probability
    plateaus the Lorenz curve crosses affinely, so for a single point mass
    only (0, 0) and (1, 1) remain. Consecutive duplicates are dropped.
    """
    require_member(d)
    ts = np.asarray(sorted(float(t) for t in t_grid), dtype=float)
    if ts.size and ts[0] < 0:
        raise ValueError("Kendall grid abscissae must be >= 0")
    xs = d._cdf_arr(ts)
    ys = np.asarray(d.partial_expectation(ts)) / d.mean
    pts: list[tuple[float, float]] = []
    for x, y in zip(xs, ys):
        pt = (float(x), float(y))
        if not pts or pts[-1] != pt:
            pts.append(pt)
    return pts


def _probe_ladder(grid: int, *extra: np.ndarray) -> np.ndarray:
    dyadic = np.asarray(
        [k / 2.0**lvl for lvl in range(1, 11) for k in range(1, 2**lvl, 2)]
    )
    parts = [np.linspace(0.0, 1.0, max(grid, 2) + 1), dyadic]
    parts.extend(extra)
    return np.unique(np.clip(np.concatenate(parts), 0.0, 1.0))


def lorenz_dominates(d1: Distribution, d2: Distribution, grid: int = 256) -> bool:
    """True when L_{d1} <= L_{d2} everywhere on the probe ladder.

    Lower Lorenz curve means more unequal; this is the classical domination
    order. Probes join a uniform grid, a dyadic ladder and both operands'
    probability breakpoints.
    """
    ps = _probe_ladder(grid, d1.p_breakpoints(), d2.p_breakpoints())
    l1 = lorenz(d1).eval(ps)
    l2 = lorenz(d2).eval(ps)
    return bool(np.all(l1 <= l2 + 1e-10))


def _curve_values(ell, grid) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(ell, LorenzCurve):
        if grid is None:
            ps = np.linspace(0.0, 1.0, 4097)
            if ell._vertices is not None:
                ps = np.unique(np.concatenate([ps, ell._vertices[0]]))
        else:
            ps = np.asarray(grid, float)
        return ps, np.asarray(ell.eval(ps), dtype=float)
    if callable(ell):
        ps = np.linspace(0.0, 1.0, 1025) if grid is None else np.asarray(grid, float)
        return ps, np.asarray([float(ell(p)) for p in ps])
    vals = np.asarray(ell, dtype=float)
    ps = np.linspace(0.0, 1.0, vals.size) if grid is None else np.asarray(grid, float)
    return ps, vals


def reconstruct(ell, target_mean: float, grid=None) -> Distribution:
    """Distribution whose Lorenz curve matches a convex grid function.

    `ell` may be a LorenzCurve, a callable on [0, 1], or an array of values
    paired with `grid` (uniform grid assumed when omitted). The grid must
    resolve the curve: the result's quantile is the left divided difference
    of the grid values scaled by `target_mean`, a step function, so the match
    is exact for piecewise-affine input with vertices on the grid and
    O(1/grid) otherwise.
    """
    target_mean = float(target_mean)
    if not (target_mean > 0) or not math.isfinite(target_mean):
        raise ValueError("target mean must be positive and finite")
    ps, vals = _curve_values(ell, grid)
    if ps.size < 3:
        raise ValueError("need at least 3 grid points to resolve a curve")
    if np.any(np.diff(ps) <= 0):
        raise ValueError("curve grid must be strictly increasing")
    if abs(ps[0]) > 1e-12 or abs(ps[-1] - 1.0) > 1e-12:
        raise ValueError("curve grid must span [0, 1]")
    if abs(vals[0]) > 1e-9:
        raise ValueError("a Lorenz curve must start at 0")
    if abs(vals[-1] - 1.0) > 1e-9:
        raise ValueError("a Lorenz curve must end at 1")
    slopes = np.diff(vals) / np.diff(ps)
    if np.any(np.diff(slopes) < -1e-9):
        raise ValueError("curve values are not convex on the supplied grid")
    if slopes[0] < -1e-9:
        raise ValueError("curve values must be nondecreasing")
    q = target_mean * np.maximum.accumulate(np.maximum(slopes, 0.0))
    # Divided differences of rounded curve values wobble by ~eps/grid-step;
    # collapse runs of near-equal quantiles so affine stretches of the input
    # come back as single atoms.
    snap = 1e-11 * np.maximum(1.0, q[1:])
    starts = np.concatenate([[True], np.diff(q) > snap])
    q = q[starts][np.cumsum(starts) - 1]
    return quantile_table(tuple(ps[:-1]), tuple(q), mode="step")


def integral_lorenz(curve: LorenzCurve, tol: float = 1e-9) -> float:
    """Integral of the Lorenz curve over [0, 1].

    Exact trapezoid sum over the affine pieces for discrete sources,
    adaptive quadrature otherwise.
    """
    if curve._vertices is not None:
        ps, ls = curve._vertices
        return float(np.trapezoid(ls, ps))
    breaks = curve.source.p_breakpoints()
    return integrate(curve._batch_for_quad, 0.0, 1.0, points=breaks, tol=tol)
