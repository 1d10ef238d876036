"""Adaptive Gauss-Kronrod quadrature for integrands with known kink locations.

The rest of the package integrates survival functions, CDF gaps and quantile
functions. Those integrands are piecewise smooth with kinks and jumps at atom
locations and component boundaries, so the integrator here accepts an explicit
list of forced split points and refines panels by a global error budget. All
panel evaluations are batched: the integrand receives one flat array per round.
"""

from __future__ import annotations

import numpy as np

# 15-point Kronrod nodes on [-1, 1] with the embedded 7-point Gauss rule.
_XGK = np.array(
    [
        -0.9914553711208126,
        -0.9491079123427585,
        -0.8648644233597691,
        -0.7415311855993944,
        -0.5860872354676911,
        -0.4058451513773972,
        -0.2077849550078985,
        0.0,
        0.2077849550078985,
        0.4058451513773972,
        0.5860872354676911,
        0.7415311855993944,
        0.8648644233597691,
        0.9491079123427585,
        0.9914553711208126,
    ]
)
_WGK = np.array(
    [
        0.0229353220105292,
        0.0630920926299786,
        0.1047900103222502,
        0.1406532597155259,
        0.1690047266392679,
        0.1903505780647854,
        0.2044329400752989,
        0.2094821410847278,
        0.2044329400752989,
        0.1903505780647854,
        0.1690047266392679,
        0.1406532597155259,
        0.1047900103222502,
        0.0630920926299786,
        0.0229353220105292,
    ]
)
# Gauss weights sit on the odd Kronrod node indices.
_WG = np.array(
    [
        0.1294849661688697,
        0.2797053914892767,
        0.3818300505051189,
        0.4179591836734694,
        0.3818300505051189,
        0.2797053914892767,
        0.1294849661688697,
    ]
)


def _eval_panels(f, lo: np.ndarray, hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate the 15-point rule on each panel [lo_i, hi_i].

    Returns (integral_estimates, error_estimates), one entry per panel. The
    error estimate follows the classic scaled-difference heuristic: it stays
    proportional to the panel's total variation when the Gauss and Kronrod
    answers disagree badly, which is what flags a hidden kink.
    """
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * _XGK[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    resk = half * (fx @ _WGK)
    resg = half * (fx[:, 1::2] @ _WG)
    mean_value = np.where(half > 0.0, resk / np.where(half > 0.0, 2.0 * half, 1.0), 0.0)
    resasc = half * (np.abs(fx - mean_value[:, None]) @ _WGK)
    diff = np.abs(resk - resg)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(resasc > 0.0, (200.0 * diff) / np.where(resasc > 0.0, resasc, 1.0), 0.0)
    err = np.where(resasc > 0.0, resasc * np.minimum(1.0, ratio**1.5), diff)
    return resk, err


def _initial_edges(a: float, b: float, points) -> np.ndarray:
    inner = np.asarray(sorted(p for p in points if a < p < b), dtype=float)
    return np.unique(np.concatenate(([a], inner, [b])))


def integrate(f, a: float, b: float, *, points=(), tol: float = 1e-10, limit: int = 4096) -> float:
    """Integrate a vectorized callable over [a, b].

    `points` lists abscissae where the integrand may jump or kink; panels are
    forced to break there. Refinement bisects every panel whose error estimate
    exceeds its share of the global budget, until the total estimated error
    drops under `tol` or the panel count reaches `limit`.
    """
    if not (b > a):
        return 0.0
    edges = _initial_edges(a, b, points)
    lo, hi = edges[:-1], edges[1:]
    vals, errs = _eval_panels(f, lo, hi)
    while errs.sum() > tol and lo.size < limit:
        mask = errs > tol / lo.size
        if not mask.any():
            break
        keep_lo, keep_hi = lo[~mask], hi[~mask]
        keep_vals, keep_errs = vals[~mask], errs[~mask]
        mids = 0.5 * (lo[mask] + hi[mask])
        new_lo = np.concatenate([lo[mask], mids])
        new_hi = np.concatenate([mids, hi[mask]])
        new_vals, new_errs = _eval_panels(f, new_lo, new_hi)
        lo = np.concatenate([keep_lo, new_lo])
        hi = np.concatenate([keep_hi, new_hi])
        vals = np.concatenate([keep_vals, new_vals])
        errs = np.concatenate([keep_errs, new_errs])
    return float(vals.sum())


def cell_integrals(
    f, edges: np.ndarray, *, tol: float = 1e-10, limit: int = 16384
) -> np.ndarray:
    """Per-cell integrals of a vectorized callable over consecutive edge pairs.

    Returns an array of length len(edges) - 1 whose k-th entry approximates the
    integral over [edges[k], edges[k+1]]. Cells are refined jointly against one
    global error budget; children keep contributing to their original cell.
    Zero-width cells yield exactly 0.
    """
    edges = np.asarray(edges, dtype=float)
    n_cells = edges.size - 1
    if n_cells <= 0:
        return np.zeros(0)
    lo, hi = edges[:-1].copy(), edges[1:].copy()
    owner = np.arange(n_cells)
    live = hi > lo
    lo, hi, owner = lo[live], hi[live], owner[live]
    out = np.zeros(n_cells)
    if lo.size == 0:
        return out
    vals, errs = _eval_panels(f, lo, hi)
    while errs.sum() > tol and lo.size < limit:
        mask = errs > tol / lo.size
        if not mask.any():
            break
        mids = 0.5 * (lo[mask] + hi[mask])
        new_lo = np.concatenate([lo[mask], mids])
        new_hi = np.concatenate([mids, hi[mask]])
        new_owner = np.concatenate([owner[mask], owner[mask]])
        new_vals, new_errs = _eval_panels(f, new_lo, new_hi)
        lo = np.concatenate([lo[~mask], new_lo])
        hi = np.concatenate([hi[~mask], new_hi])
        owner = np.concatenate([owner[~mask], new_owner])
        vals = np.concatenate([vals[~mask], new_vals])
        errs = np.concatenate([errs[~mask], new_errs])
    np.add.at(out, owner, vals)
    return out
