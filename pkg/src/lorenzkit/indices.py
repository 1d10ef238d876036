"""Gini and Hoover indices, each by several independent routes.

Routes are deliberately redundant: a disagreement between them is the
cheapest bug detector this package has, so nothing here shares a code path
with the route it is checked against.

Gini comes as half the normalized mean absolute difference (computed in
probability space), as one minus the ratio of integrated squared survival to
integrated survival, and as one minus twice the area under the Lorenz curve.
Hoover comes as half the normalized mean absolute deviation, as the Lorenz
gap at the cumulative probability of the mean, and as the maximum Lorenz gap
over a probability sweep.

The mean-difference route rests on the double integral of |Q(u) - Q(v)| over
the unit square. Cutting the square into cells [a_i, a_{i+1}) x [a_j, a_{j+1})
along a shared probability grid, monotonicity of Q makes every off-diagonal
cell integrable in closed form from per-cell quantile integrals, and each
diagonal cell reduces to the one-dimensional integral
``2 * int Q(v) (2v - a_i - a_{i+1}) dv``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lorenz import integral_lorenz, lorenz
from .measures import Distribution, discrete, require_member
from .quadrature import cell_integrals, integrate

__all__ = [
    "IndexReport",
    "gini_mean_difference",
    "gini_dorfman",
    "gini_lorenz",
    "hoover_mean_deviation",
    "hoover_cdf",
    "hoover_max",
    "robin_hood_shares",
    "index_report",
    "gini_range_given_hoover",
    "extremal_bimodal",
]


def _mean_abs_difference_discrete(d: Distribution) -> float:
    support, weights = d.support_atoms()
    cum = np.cumsum(weights)
    cum_prev = np.concatenate([[0.0], cum[:-1]])
    return float(2.0 * np.sum(weights * support * (cum + cum_prev - 1.0)))


def _p_cells(d: Distribution) -> np.ndarray:
    """Probability grid whose cells contain no quantile jumps or kinks."""
    tail = 1.0 - 2.0 ** -np.arange(1.0, 41.0)
    edges = np.concatenate(
        [d.p_breakpoints(), np.linspace(0.0, 1.0, 65), tail, [0.0, 1.0]]
    )
    return np.unique(np.clip(edges, 0.0, 1.0))


def _quantile_integrals(d: Distribution, edges: np.ndarray) -> np.ndarray:
    """Integral of Q over each cell of `edges`, by partial-expectation identity.

    S(p) = pe_left(Q(p)) + Q(p) * (p - F_left(Q(p))) holds for every p < 1,
    and S(1) is the mean, so cell integrals are differences of exactly
    evaluable endpoint values; no quadrature enters.
    """
    inner = edges[:-1] if edges[-1] == 1.0 else edges
    q = d._quantile_arr(inner)
    s = np.asarray(d.partial_expectation_left(q)) + q * (
        inner - np.asarray(d.cdf_left(q))
    )
    if edges[-1] == 1.0:
        s = np.concatenate([s, [d.mean]])
    return np.diff(s)


def _mean_abs_difference(d: Distribution) -> float:
    if d.is_finite_discrete:
        return _mean_abs_difference_discrete(d)
    edges = _p_cells(d)
    w = np.diff(edges)
    s = _quantile_integrals(d, edges)
    w_prefix = np.concatenate([[0.0], np.cumsum(w)[:-1]])
    s_prefix = np.concatenate([[0.0], np.cumsum(s)[:-1]])
    off_diagonal = 2.0 * float(np.sum(s * w_prefix) - np.sum(w * s_prefix))

    def v_times_q(p: np.ndarray) -> np.ndarray:
        return p * d._quantile_arr(np.minimum(p, 1.0 - 2.0**-44))

    a = cell_integrals(v_times_q, edges, tol=1e-11)
    diagonal = float(np.sum(2.0 * (2.0 * a - (edges[:-1] + edges[1:]) * s)))
    return off_diagonal + diagonal


def gini_mean_difference(d: Distribution) -> float:
    """Gini index as E|X - X'| / (2 mean), X' an independent copy."""
    require_member(d)
    return _mean_abs_difference(d) / (2.0 * d.mean)


def gini_dorfman(d: Distribution) -> float:
    """Gini index as 1 - (integral of survival squared) / (integral of survival)."""
    require_member(d)
    if d.is_finite_discrete:
        support, weights = d.support_atoms()
        surv = 1.0 - np.cumsum(weights)
        x = np.concatenate([[0.0], support])
        s_steps = np.concatenate([[1.0], surv])
        widths = np.diff(x)
        i1 = float(np.sum(widths * s_steps[:-1]))
        i2 = float(np.sum(widths * s_steps[:-1] ** 2))
        return 1.0 - i2 / i1
    hi = d.support_hi(1e-13)
    xb = d.x_breakpoints()
    pts = tuple(xb[(xb > 0.0) & (xb < hi)])

    def surv(x: np.ndarray) -> np.ndarray:
        return 1.0 - d._cdf_arr(x)

    i1 = integrate(surv, 0.0, hi, points=pts, tol=1e-11)
    i2 = integrate(lambda x: surv(x) ** 2, 0.0, hi, points=pts, tol=1e-11)
    i1 += max(d.mean - d.partial_expectation(hi) - hi * d.survival(hi), 0.0)
    return 1.0 - i2 / i1


def gini_lorenz(d: Distribution) -> float:
    """Gini index as 1 - 2 * area under the Lorenz curve."""
    return 1.0 - 2.0 * integral_lorenz(lorenz(d))


def hoover_mean_deviation(d: Distribution) -> float:
    """Hoover index as E|X - mean| / (2 mean)."""
    require_member(d)
    m = d.mean
    if d.is_finite_discrete:
        support, weights = d.support_atoms()
        return float(np.sum(weights * np.abs(support - m))) / (2.0 * m)
    hi = max(d.support_hi(1e-13), m * (1.0 + 1e-9))
    xb = d.x_breakpoints()
    lower_pts = tuple(xb[(xb > 0.0) & (xb < m)])
    upper_pts = tuple(xb[(xb > m) & (xb < hi)])
    below = integrate(d._cdf_arr, 0.0, m, points=lower_pts, tol=1e-11)
    above = integrate(
        lambda x: 1.0 - d._cdf_arr(x), m, hi, points=upper_pts, tol=1e-11
    )
    above += max(d.mean - d.partial_expectation(hi) - hi * d.survival(hi), 0.0)
    return (below + above) / (2.0 * m)


def hoover_cdf(d: Distribution) -> float:
    """Hoover index as F(mean) - L(F(mean)), the Lorenz gap at the mean."""
    require_member(d)
    p_star = float(d.cdf(d.mean))
    return p_star - d.integral_quantile(p_star) / d.mean


def hoover_max(d: Distribution) -> float:
    """Hoover index as the largest vertical gap p - L(p).

    The gap is maximized at p = F(mean); the value there is returned after a
    sweep over a dyadic-plus-uniform probability ladder confirms no probe
    beats it by more than numerical slack.
    """
    require_member(d)
    curve = lorenz(d)
    p_star = float(d.cdf(d.mean))
    value = p_star - float(curve.eval(p_star))
    dyadic = np.asarray(
        [k / 2.0**lvl for lvl in range(1, 11) for k in range(1, 2**lvl, 2)]
    )
    ps = np.unique(
        np.concatenate([np.linspace(0.0, 1.0, 1025), dyadic, d.p_breakpoints()])
    )
    sweep = float(np.max(ps - curve.eval(ps)))
    if sweep > value + 1e-9:
        raise RuntimeError(
            "Lorenz gap sweep exceeded the value at F(mean) "
            f"({sweep:.3e} > {value:.3e}); quantile evaluation is inconsistent"
        )
    return value


def robin_hood_shares(d: Distribution) -> tuple[float, float]:
    """Surplus above the mean and shortfall below it, as absolute amounts.

    The first component integrates x - mean over strictly-above-mean incomes,
    the second integrates mean - x over strictly-below-mean incomes. Mass
    exactly at the mean enters neither. The two agree analytically; they are
    computed from different primitives so the report can cross-check them.
    """
    require_member(d)
    m = d.mean
    above = float((m - d.partial_expectation(m)) - m * d.survival(m))
    below = float(m * d.cdf_left(m) - d.partial_expectation_left(m))
    return max(above, 0.0), max(below, 0.0)


@dataclass(frozen=True)
class IndexReport:
    """Every index route for one distribution, plus their disagreements."""

    gini_mean_difference: float
    gini_dorfman: float
    gini_lorenz: float
    hoover_mean_deviation: float
    hoover_cdf: float
    hoover_max: float
    r_share: float
    p_share: float
    max_cross_route_residual: float

    def residuals(self) -> dict[str, float]:
        ginis = (self.gini_mean_difference, self.gini_dorfman, self.gini_lorenz)
        hoovers = (self.hoover_mean_deviation, self.hoover_cdf, self.hoover_max)
        return {
            "gini": max(ginis) - min(ginis),
            "hoover": max(hoovers) - min(hoovers),
            "r_minus_p": abs(self.r_share - self.p_share),
        }

    def to_json_dict(self) -> dict:
        out: dict = {
            "gini_mean_difference": self.gini_mean_difference,
            "gini_dorfman": self.gini_dorfman,
            "gini_lorenz": self.gini_lorenz,
            "hoover_mean_deviation": self.hoover_mean_deviation,
            "hoover_cdf": self.hoover_cdf,
            "hoover_max": self.hoover_max,
            "r_share": self.r_share,
            "p_share": self.p_share,
            "max_cross_route_residual": self.max_cross_route_residual,
        }
        out["residuals"] = self.residuals()
        return out


def index_report(d: Distribution) -> IndexReport:
    """Compute every route and record the largest within-index disagreement."""
    g_md = gini_mean_difference(d)
    g_dorf = gini_dorfman(d)
    g_lor = gini_lorenz(d)
    h_md = hoover_mean_deviation(d)
    h_cdf = hoover_cdf(d)
    h_max = hoover_max(d)
    r, p = robin_hood_shares(d)
    residual = max(
        max(g_md, g_dorf, g_lor) - min(g_md, g_dorf, g_lor),
        max(h_md, h_cdf, h_max) - min(h_md, h_cdf, h_max),
    )
    return IndexReport(
        gini_mean_difference=g_md,
        gini_dorfman=g_dorf,
        gini_lorenz=g_lor,
        hoover_mean_deviation=h_md,
        hoover_cdf=h_cdf,
        hoover_max=h_max,
        r_share=r,
        p_share=p,
        max_cross_route_residual=residual,
    )


def gini_range_given_hoover(h: float) -> tuple[float, float]:
    """Attainable Gini interval for a fixed Hoover value: [h, 2h - h^2).

    The lower endpoint is attained (two atoms), the upper endpoint is an open
    supremum: returned as the exclusive bound.
    """
    h = float(h)
    if not (0.0 < h < 1.0):
        raise ValueError("Hoover value must lie strictly between 0 and 1")
    return h, 2.0 * h - h * h


def extremal_bimodal(h: float, mean: float = 1.0, alpha: float | None = None) -> Distribution:
    """Two-atom distribution with Gini equal to Hoover equal to h.

    A fraction alpha holds m(1 - h/alpha) each, the rest holds
    m(1 + h/(1 - alpha)); any alpha in [h, 1) works and alpha = h puts the
    lower atom at zero. Defaults to alpha = h.
    """
    h = float(h)
    mean = float(mean)
    if not (0.0 < h < 1.0):
        raise ValueError("Hoover value must lie strictly between 0 and 1")
    if not (mean > 0.0 and math.isfinite(mean)):
        raise ValueError("mean must be positive and finite")
    alpha = h if alpha is None else float(alpha)
    if not (h <= alpha < 1.0):
        raise ValueError(
            "alpha must lie in [h, 1); below h the lower atom would be negative"
        )
    lo = mean * (1.0 - h / alpha)
    hi = mean * (1.0 + h / (1.0 - alpha))
    return discrete([lo, hi], [alpha, 1.0 - alpha])
