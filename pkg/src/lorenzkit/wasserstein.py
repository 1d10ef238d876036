"""Wasserstein-1 distance and convergence diagnostics.

W1 between two laws on the half-line is both the L1 distance between their
quantile functions on (0, 1) and the L1 distance between their distribution
functions on (0, inf). Both routes are always computed; they must agree
within tolerance or the call fails loudly, and the quantile-route value is
what callers get. For a pair of finite-discrete laws both routes are exact
sums over merged breakpoints.

The diagnostics half of the module watches a sequence against a candidate
limit and classifies it: convergent in W1, weakly convergent with escaping
mass (means do not converge), or not even weakly convergent. Weak
convergence is probed through quantile values on a dyadic ladder that
avoids the limit's discontinuities; the mass-escape check compares means
and, independently, looks at a uniform-integrability tail functional, and
the two classifications are cross-checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .indices import gini_mean_difference, hoover_mean_deviation
from .lorenz import lorenz, reconstruct
from .measures import Distribution, atom, require_member

__all__ = [
    "w1",
    "w1_routes",
    "ui_tail",
    "lorenz_tail_gap",
    "limit_from_lorenz",
    "StepDiagnostics",
    "LimitSummary",
    "ConvergenceReport",
    "sequence_diagnostics",
]

_P_TAIL = 1.0 - 2.0**-40


def _w1_discrete(d1: Distribution, d2: Distribution) -> tuple[float, float]:
    s1, _, c1 = d1._discrete
    s2, _, c2 = d2._discrete
    levels = np.unique(np.concatenate([[0.0], c1, c2]))
    right = levels[1:]
    q1 = s1[np.searchsorted(c1, right, side="left")]
    q2 = s2[np.searchsorted(c2, right, side="left")]
    by_quantile = float(np.sum(np.diff(levels) * np.abs(q1 - q2)))
    xs = np.unique(np.concatenate([s1, s2]))
    f1 = d1._cdf_arr(xs[:-1])
    f2 = d2._cdf_arr(xs[:-1])
    by_cdf = float(np.sum(np.diff(xs) * np.abs(f1 - f2)))
    return by_quantile, by_cdf


def _q_within(d: Distribution, p: np.ndarray, lo, hi, tol: float) -> np.ndarray:
    """Left quantiles to absolute tolerance: values in [Q(p), Q(p) + tol].

    `lo` and `hi` must bracket Q(p) elementwise with cdf(hi) >= p. Plain
    bisection on the cdf; callers that subdivide cells pass the parents'
    quantile values back in, so brackets shrink and iterations stay few.
    """
    if d._discrete is not None:
        return d._quantile_arr(p)
    lo = np.asarray(lo, dtype=float).copy()
    hi = np.asarray(hi, dtype=float).copy()
    active = (hi - lo) > tol
    while np.any(active):
        mid = 0.5 * (lo[active] + hi[active])
        ge = d._cdf_arr(mid) >= p[active]
        hi_a, lo_a = hi[active], lo[active]
        hi_a[ge] = mid[ge]
        lo_a[~ge] = mid[~ge]
        hi[active], lo[active] = hi_a, lo_a
        active = (hi - lo) > tol
    return hi


def _abs_gap_body(edges: np.ndarray, evaluate, budget: float) -> tuple[float, float, float]:
    """Integral of |g1 - g2| between two nondecreasing functions over cells.

    `evaluate(points, br1, br2)` returns (g1, A1, g2, A2) where A_i is an
    exact antiderivative of g_i; `br_i` are bracket arrays for inverse-style
    evaluators (None on the first call). On any cell, monotonicity pins
    g1 - g2 inside [g1(a) - g2(b), g1(b) - g2(a)]; cells where that interval
    has one sign contribute |A-difference| exactly, the rest split in half,
    everything vectorized one depth level at a time. Ambiguous cells are
    accepted once their width-times-oscillation bound fits the remaining
    error budget. Returns (integral, A1 at the last edge, A2 at the last
    edge); the trailing antiderivative values serve tail corrections.
    """
    v1, a1, v2, a2 = evaluate(edges, None, None)
    end1, end2 = float(a1[-1]), float(a2[-1])
    a, b = edges[:-1], edges[1:]
    va1, vb1 = v1[:-1], v1[1:]
    va2, vb2 = v2[:-1], v2[1:]
    aa1, ab1 = a1[:-1], a1[1:]
    aa2, ab2 = a2[:-1], a2[1:]
    total = 0.0
    spent = 0.0
    for depth in range(48):
        integ = (ab1 - aa1) - (ab2 - aa2)
        osc = (vb1 - va2) - (va1 - vb2)
        err = (b - a) * osc
        sure = ((va1 - vb2) >= 0.0) | ((vb1 - va2) <= 0.0)
        n_active = int(np.sum(~sure))
        if n_active:
            allowance = max(budget - spent, 0.0) / n_active
            accept = ~sure & (err <= allowance)
            spent += float(err[accept].sum())
        else:
            accept = np.zeros_like(sure)
        done = sure | accept
        total += float(np.abs(integ[done]).sum())
        keep = ~done
        n_keep = int(keep.sum())
        if n_keep == 0 or depth == 47 or 2 * n_keep > 16384:
            total += float(np.abs(integ[keep]).sum())
            break
        mid = 0.5 * (a[keep] + b[keep])
        m1, c1, m2, c2 = evaluate(
            mid, (va1[keep], vb1[keep]), (va2[keep], vb2[keep])
        )
        a, b = np.concatenate([a[keep], mid]), np.concatenate([mid, b[keep]])
        va1, vb1 = np.concatenate([va1[keep], m1]), np.concatenate([m1, vb1[keep]])
        va2, vb2 = np.concatenate([va2[keep], m2]), np.concatenate([m2, vb2[keep]])
        aa1, ab1 = np.concatenate([aa1[keep], c1]), np.concatenate([c1, ab1[keep]])
        aa2, ab2 = np.concatenate([aa2[keep], c2]), np.concatenate([c2, ab2[keep]])
    return total, end1, end2


def _w1_general(d1: Distribution, d2: Distribution) -> tuple[float, float]:
    """Both W1 routes for at least one non-discrete law, quadrature free.

    Quantile route: cells in p, cell integrals of Q from the partial
    expectation identity S(p) = pe_left(Q(p)) + Q(p)(p - F_left(Q(p))).
    Approximate quantiles are harmless here: S is stationary in its quantile
    argument, so an O(tol) quantile error moves S by O(tol) at worst (and
    O(tol^2) off plateaus). CDF route: cells in x, cell integrals of F from
    integration by parts, A(x) = x F(x) - pe(x). Both truncate at matched
    tails whose first moments enter as a difference.
    """
    scale = max(1.0, d1.mean + d2.mean)
    budget = 1e-7 * scale
    hi1 = d1.support_hi(1e-13)
    hi2 = d2.support_hi(1e-13)
    tol_q = 1e-11 * max(1.0, hi1, hi2)

    tail_levels = 1.0 - 2.0 ** -np.arange(1.0, 41.0)
    edges = np.concatenate(
        [d1.p_breakpoints(), d2.p_breakpoints(), np.linspace(0.0, 1.0, 129), tail_levels]
    )
    edges = np.unique(np.concatenate([edges[edges < _P_TAIL], [0.0, _P_TAIL]]))

    def eval_q(ps, br1, br2):
        out = []
        for d, br, hi_d in ((d1, br1, hi1), (d2, br2, hi2)):
            if br is None:
                lo = np.zeros_like(ps)
                hi = np.full_like(ps, max(hi_d, 0.0))
            else:
                lo = np.maximum(br[0] - tol_q, 0.0)
                hi = br[1]
            q = _q_within(d, ps, lo, hi, tol_q)
            s = np.asarray(d.partial_expectation_left(q)) + q * (
                ps - np.asarray(d.cdf_left(q))
            )
            out.extend((q, s))
        return tuple(out)

    body_q, s1_tail, s2_tail = _abs_gap_body(edges, eval_q, budget)
    by_quantile = body_q + abs(
        max(d1.mean - s1_tail, 0.0) - max(d2.mean - s2_tail, 0.0)
    )

    hi = max(hi1, hi2, 1e-12)
    xb = np.concatenate([d1.x_breakpoints(), d2.x_breakpoints()])
    xedges = np.unique(
        np.concatenate([xb[(xb > 0.0) & (xb < hi)], np.linspace(0.0, hi, 129)])
    )

    def eval_x(xs, br1, br2):
        f1 = d1._cdf_arr(xs)
        f2 = d2._cdf_arr(xs)
        a1 = xs * f1 - np.asarray(d1.partial_expectation(xs))
        a2 = xs * f2 - np.asarray(d2.partial_expectation(xs))
        return f1, a1, f2, a2

    body_f, _, _ = _abs_gap_body(xedges, eval_x, budget)
    t1 = max(d1.mean - d1.partial_expectation(hi) - hi * d1.survival(hi), 0.0)
    t2 = max(d2.mean - d2.partial_expectation(hi) - hi * d2.survival(hi), 0.0)
    by_cdf = body_f + abs(t1 - t2)
    return by_quantile, by_cdf


def w1_routes(d1: Distribution, d2: Distribution) -> tuple[float, float]:
    """Both W1 evaluations (quantile-gap integral, cdf-gap integral).

    The routes must agree (1e-8 for a pair of finite-discrete laws, 1e-5
    otherwise, scaled up for large means). Raises RuntimeError on
    disagreement, which indicates an evaluation bug rather than a property
    of the inputs.
    """
    exact = d1.is_finite_discrete and d2.is_finite_discrete
    by_quantile, by_cdf = (
        _w1_discrete(d1, d2) if exact else _w1_general(d1, d2)
    )
    tol = (1e-8 if exact else 1e-5) * max(1.0, d1.mean + d2.mean)
    if abs(by_quantile - by_cdf) > tol:
        raise RuntimeError(
            f"W1 route disagreement: quantile {by_quantile!r} vs cdf {by_cdf!r}"
        )
    return by_quantile, by_cdf


def w1(d1: Distribution, d2: Distribution) -> float:
    """Wasserstein-1 distance between two laws with finite means.

    Computed twice (see w1_routes); the quantile-route value is returned.
    """
    return w1_routes(d1, d2)[0]


def ui_tail(family, alpha: float) -> float:
    """Worst tail first moment over a family: sup of E[X; X > alpha].

    Vanishing of this as alpha grows is uniform integrability, the exact gap
    between weak convergence and W1 convergence for mean-normalized laws.
    """
    ds = list(family)
    if not ds:
        raise ValueError("family must be nonempty")
    alpha = float(alpha)
    if not (alpha >= 0.0 and math.isfinite(alpha)):
        raise ValueError("tail cutoff must be finite and >= 0")
    return max(d.tail_moment(alpha) for d in ds)


def lorenz_tail_gap(family, p: float) -> float:
    """One minus the smallest Lorenz value at p across the family.

    The top (1 - p) share of the most concentrated member; a uniform-in-family
    Lorenz lower bound near 1 caps how much mass the family can push to the
    tail.
    """
    ds = list(family)
    if not ds:
        raise ValueError("family must be nonempty")
    p = float(p)
    if not (0.0 <= p <= 1.0):
        raise ValueError("Lorenz argument must lie in [0, 1]")
    return 1.0 - min(float(lorenz(d).eval(p)) for d in ds)


def limit_from_lorenz(ell, alpha: float, grid=None) -> tuple[Distribution, float]:
    """Recover the weak limit from a limiting Lorenz-type curve and mean scale.

    `ell` is the pointwise limit of Lorenz curves on [0, 1), given as a
    callable or as values on `grid` (default: 1024 uniform cells of [0, 1));
    it may top out below 1 when mass escapes. `alpha` is the limit of the
    means. The limiting mean is alpha times the left limit of `ell` at 1
    (linearly extrapolated from the last two grid points, exact whenever the
    final piece is affine); when that is zero the limit is the point mass at
    zero with zero mean. Otherwise `ell` rescaled to a genuine Lorenz curve
    is carried back to a distribution with the limiting mean.
    """
    alpha = float(alpha)
    if not (alpha >= 0.0 and math.isfinite(alpha)):
        raise ValueError("mean scale must be finite and >= 0")
    if grid is None:
        ps = np.linspace(0.0, 1.0, 1025)[:-1]
    else:
        ps = np.asarray(grid, dtype=float)
    if ps.size < 3 or np.any(np.diff(ps) <= 0) or ps[0] != 0.0 or ps[-1] >= 1.0:
        raise ValueError("grid must be strictly increasing, start at 0, stay below 1")
    vals = (
        np.asarray([float(ell(p)) for p in ps])
        if callable(ell)
        else np.asarray(ell, dtype=float)
    )
    if vals.shape != ps.shape:
        raise ValueError("curve values must match the grid")
    last_slope = (vals[-1] - vals[-2]) / (ps[-1] - ps[-2])
    at_one = vals[-1] + last_slope * (1.0 - ps[-1])
    mean_limit = at_one * alpha
    if mean_limit <= 1e-12:
        return atom(0.0), 0.0
    full_ps = np.concatenate([ps, [1.0]])
    full_vals = np.concatenate([vals / at_one, [1.0]])
    return reconstruct(full_vals, mean_limit, grid=full_ps), mean_limit


@dataclass(frozen=True)
class StepDiagnostics:
    """Everything measured about one member of the sequence."""

    index: int
    w1_to_limit: float
    mean: float
    gini: float
    hoover: float
    lorenz_sup_error: float
    ui_tail_at_alpha: float


@dataclass(frozen=True)
class LimitSummary:
    mean: float
    gini: float
    hoover: float


@dataclass(frozen=True)
class ConvergenceReport:
    """Per-step diagnostics plus a classification of the sequence.

    verdict is one of "w1_convergent", "weak_only", "divergent", decided from
    the final step: quantile probes against the limit settle or not, and if
    they settle, whether the means also land on the limit mean. The same
    classification is recomputed from the uniform-integrability tail
    functional instead of the means (scheffe_verdict); the two must agree
    unless the thresholds are straddled by a borderline sequence.
    """

    steps: tuple[StepDiagnostics, ...]
    limit_summary: LimitSummary
    verdict: str
    deciding_diagnostic: str
    scheffe_verdict: str
    alpha_ref: float
    rel_tol: float

    _TSV_COLUMNS = (
        "index",
        "w1_to_limit",
        "mean",
        "gini",
        "hoover",
        "lorenz_sup_error",
        "ui_tail_at_alpha",
    )

    def to_json_dict(self) -> dict:
        return {
            "steps": [
                {name: getattr(s, name) for name in self._TSV_COLUMNS}
                for s in self.steps
            ],
            "limit_summary": {
                "mean": self.limit_summary.mean,
                "gini": self.limit_summary.gini,
                "hoover": self.limit_summary.hoover,
            },
            "verdict": self.verdict,
            "deciding_diagnostic": self.deciding_diagnostic,
            "scheffe_verdict": self.scheffe_verdict,
            "alpha_ref": self.alpha_ref,
            "rel_tol": self.rel_tol,
        }

    def tsv_rows(self) -> list[tuple]:
        rows = [self._TSV_COLUMNS]
        for s in self.steps:
            rows.append(tuple(getattr(s, name) for name in self._TSV_COLUMNS))
        return rows


def _weak_probes(limit: Distribution) -> np.ndarray:
    dyadic = np.asarray(
        [k / 2.0**lvl for lvl in range(1, 11) for k in range(1, 2**lvl, 2)]
    )
    jumps = limit.p_breakpoints()
    jumps = jumps[(jumps > 0.0) & (jumps < 1.0)]
    if jumps.size:
        clear = np.min(np.abs(dyadic[:, None] - jumps[None, :]), axis=1) > 1e-9
        dyadic = dyadic[clear]
    return dyadic


def _lorenz_ladder(limit: Distribution) -> np.ndarray:
    dyadic = np.asarray(
        [k / 2.0**lvl for lvl in range(1, 11) for k in range(1, 2**lvl, 2)]
    )
    return np.unique(
        np.concatenate(
            [dyadic, np.linspace(0.0, 1.0, 65), limit.p_breakpoints(), [0.0, 1.0]]
        )
    )


def sequence_diagnostics(
    seq,
    limit: Distribution,
    probes=None,
    rel_tol: float = 0.05,
    alpha_grid=None,
) -> ConvergenceReport:
    """Measure a sequence against its candidate limit and classify it.

    Every step gets its W1 distance to the limit, mean, Gini, Hoover, the
    sup gap between its Lorenz curve and the limit's on a fixed ladder, and
    the tail first moment above alpha_ref (the largest entry of alpha_grid,
    default mean * (2, 4, 8, 16)). Thresholds are rel_tol times the limit
    mean throughout.

    Weak convergence is probed on `probes` (default: a dyadic ladder that
    sidesteps the limit's quantile jumps) through a two-sided band: the
    final member's quantile at p has to land inside the limit's quantile
    range over [p - rel_tol/2, p + rel_tol/2], stretched by the value
    tolerance. The probability slack makes the probe insensitive to mass
    that sits epsilon to the side of a jump of Q_inf, which is exactly the
    freedom weak convergence grants; a law that is genuinely displaced
    still fails because no nearby p explains its quantile values.
    """
    members = list(seq)
    if not members:
        raise ValueError("sequence must be nonempty")
    require_member(limit)
    m_inf = limit.mean
    if alpha_grid is None:
        alpha_grid = m_inf * np.asarray([2.0, 4.0, 8.0, 16.0])
    alpha_ref = float(np.max(np.asarray(list(alpha_grid), dtype=float)))

    if probes is None:
        probes = _weak_probes(limit)
    else:
        probes = np.asarray(list(probes), dtype=float)
        if probes.size == 0 or np.any(probes <= 0.0) or np.any(probes >= 1.0):
            raise ValueError("probes must be a nonempty ladder inside (0, 1)")
    ladder = _lorenz_ladder(limit)
    q_limit = limit._quantile_arr(probes)
    delta = 0.5 * rel_tol
    band_lo = limit._quantile_arr(np.maximum(probes - delta, 0.0))
    band_hi = limit._quantile_arr(np.minimum(probes + delta, _P_TAIL))
    l_limit = lorenz(limit).eval(ladder)

    steps = []
    for i, d in enumerate(members):
        require_member(d)
        curve = lorenz(d)
        steps.append(
            StepDiagnostics(
                index=i,
                w1_to_limit=w1(d, limit),
                mean=d.mean,
                gini=gini_mean_difference(d),
                hoover=hoover_mean_deviation(d),
                lorenz_sup_error=float(
                    np.max(np.abs(curve.eval(ladder) - l_limit))
                ),
                ui_tail_at_alpha=d.tail_moment(alpha_ref),
            )
        )

    last = members[-1]
    scale = rel_tol * m_inf
    # Quantile values live on their own scale (the top of the probed range),
    # which for skewed laws is well above the mean.
    q_scale = rel_tol * max(m_inf, float(np.max(q_limit, initial=0.0)))
    q_last = last._quantile_arr(probes)
    weak_gap = float(
        np.max(np.maximum(band_lo - q_last, q_last - band_hi), initial=0.0)
    )
    weak_gap = max(weak_gap, 0.0)
    weak_ok = weak_gap <= q_scale
    mean_gap = abs(steps[-1].mean - m_inf)
    means_ok = mean_gap <= scale
    w1_ok = steps[-1].w1_to_limit <= scale
    ui_ok = steps[-1].ui_tail_at_alpha <= scale

    if weak_ok and means_ok and w1_ok:
        verdict = "w1_convergent"
        deciding = (
            f"final W1 to limit is {steps[-1].w1_to_limit:.4g}, within "
            f"{rel_tol:g} * limit mean = {scale:.4g}, and means agree"
        )
    elif weak_ok:
        verdict = "weak_only"
        deciding = (
            f"quantile probes settle (band excess {weak_gap:.4g}) but the "
            f"final mean {steps[-1].mean:.6g} misses the limit mean "
            f"{m_inf:.6g} by {mean_gap:.4g}"
            if not means_ok
            else f"quantile probes settle but final W1 "
            f"{steps[-1].w1_to_limit:.4g} exceeds {scale:.4g}"
        )
    else:
        verdict = "divergent"
        deciding = (
            f"quantile probes do not settle: band excess {weak_gap:.4g} "
            f"exceeds {q_scale:.4g} at the final step"
        )

    if weak_ok and ui_ok:
        scheffe = "w1_convergent"
    elif weak_ok:
        scheffe = "weak_only"
    else:
        scheffe = "divergent"

    return ConvergenceReport(
        steps=tuple(steps),
        limit_summary=LimitSummary(
            mean=m_inf,
            gini=gini_mean_difference(limit),
            hoover=hoover_mean_deviation(limit),
        ),
        verdict=verdict,
        deciding_diagnostic=deciding,
        scheffe_verdict=scheffe,
        alpha_ref=alpha_ref,
        rel_tol=rel_tol,
    )
