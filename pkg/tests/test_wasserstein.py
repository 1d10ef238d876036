"""Transport distance and the convergence diagnostics built on it."""

import math

import numpy as np
import pytest

from lorenzkit import (
    atom,
    discrete,
    exponential,
    midpoint_atom_mixture,
    gamma_dist,
    index_report,
    limit_from_lorenz,
    lognormal,
    lorenz,
    lorenz_tail_gap,
    mixture,
    scenario_sequence,
    sequence_diagnostics,
    ui_tail,
    uniform,
    w1,
    w1_routes,
)
from lorenzkit.catalog import counterexample1_step
from lorenzkit.estimators import quantile_approx


GOLDEN_PAIRS = [
    (uniform(0.0, 1.0), atom(0.5), 0.25),
    (uniform(0.0, 1.0), uniform(2.0, 4.0), 2.5),
    (exponential(1.0), exponential(2.0), 0.5),
    (atom(1.0), atom(4.0), 3.0),
    (discrete([0.0, 1.0]), atom(1.0), 0.5),
    (discrete([0.0, 1.0]), atom(0.5), 0.5),
    (midpoint_atom_mixture(), uniform(0.0, 1.0), 0.125),
    (uniform(0.0, 1.0), uniform(1.0, 2.0), 1.0),
]


@pytest.mark.parametrize("d1,d2,expected", GOLDEN_PAIRS)
def test_closed_form_distances(d1, d2, expected):
    assert w1(d1, d2) == pytest.approx(expected, abs=1e-9)


def test_symmetry_is_exact(battery):
    picks = [battery[i][1] for i in (0, 4, 8, 11, 17)]
    for a in picks:
        for b in picks:
            assert w1(a, b) == w1(b, a)


def test_self_distance_vanishes(battery):
    for name, d in battery:
        tol = 1e-12 if d.is_finite_discrete else 1e-9
        assert w1(d, d) < tol, name


def test_triangle_inequality_spot():
    a = midpoint_atom_mixture()
    b = gamma_dist(2.0, 0.5)
    c = discrete([0.0, 1.0, 2.0], [0.2, 0.5, 0.3])
    assert w1(a, c) <= w1(a, b) + w1(b, c) + 1e-10


def test_route_agreement_over_battery_pairs(battery):
    worst_exact = 0.0
    worst_quad = 0.0
    for i, (n1, d1) in enumerate(battery):
        for n2, d2 in battery[i + 1:]:
            by_q, by_f = w1_routes(d1, d2)
            gap = abs(by_q - by_f)
            scale = max(1.0, d1.mean + d2.mean)
            if d1.is_finite_discrete and d2.is_finite_discrete:
                worst_exact = max(worst_exact, gap / scale)
            else:
                worst_quad = max(worst_quad, gap / scale)
    assert worst_exact < 1e-8
    assert worst_quad < 1e-5


def test_distance_is_mean_gap_under_displacement():
    # U[1,2] first-order dominates U[0,1]; the transport cost collapses to
    # the difference of means.
    assert w1(uniform(0.0, 1.0), uniform(1.0, 2.0)) == pytest.approx(1.0, abs=1e-10)
    d = lognormal(0.0, 0.5)
    shifted = mixture([(1.0, d)]).rescaled(1.0)  # same law, fresh object
    assert w1(d, shifted) < 1e-9


def test_zero_distance_implies_matching_reports():
    d1 = mixture([(0.5, uniform(0.0, 1.0)), (0.5, uniform(0.0, 1.0))])
    d2 = uniform(0.0, 1.0)
    assert w1(d1, d2) < 1e-9
    r1 = index_report(d1).to_json_dict()
    r2 = index_report(d2).to_json_dict()
    for key in ("gini_mean_difference", "hoover_mean_deviation"):
        assert r1[key] == pytest.approx(r2[key], abs=1e-6)
    ps = np.linspace(0.0, 1.0, 33)
    np.testing.assert_allclose(
        lorenz(d1).eval(ps), lorenz(d2).eval(ps), atol=1e-8
    )


# ---------------------------------------------------------------------------
# uniform integrability and tail diagnostics
# ---------------------------------------------------------------------------


def test_ui_tail_closed_form():
    fam = [exponential(1.0)]
    for a in (0.0, 1.0, 3.0):
        assert ui_tail(fam, a) == pytest.approx((a + 1.0) * math.exp(-a), rel=1e-10)


def test_ui_tail_nonincreasing(battery):
    fam = [d for _, d in battery[8:14]]
    alphas = np.linspace(0.0, 12.0, 25)
    vals = [ui_tail(fam, a) for a in alphas]
    assert all(x >= y - 1e-12 for x, y in zip(vals, vals[1:]))


def test_ui_tail_detects_escaping_mass():
    fam = [counterexample1_step(n) for n in range(2, 30)]
    # every member parks unit expectation at n^2, so no cutoff kills the tail
    assert ui_tail(fam, 8.0) >= 1.0
    assert ui_tail([uniform(0.0, 1.0)], 1.0) == 0.0


def test_ui_tail_validation():
    with pytest.raises(ValueError):
        ui_tail([], 1.0)
    with pytest.raises(ValueError):
        ui_tail([atom(1.0)], -2.0)


def test_lorenz_tail_gap_values():
    assert lorenz_tail_gap([uniform(0.0, 1.0)], 0.5) == pytest.approx(0.75, abs=1e-9)
    assert lorenz_tail_gap([atom(2.0)], 0.5) == pytest.approx(0.5, abs=1e-12)
    with pytest.raises(ValueError):
        lorenz_tail_gap([atom(1.0)], 1.5)


# ---------------------------------------------------------------------------
# limit reconstruction from shrunk curves
# ---------------------------------------------------------------------------


def test_limit_from_identity_curve():
    d, m = limit_from_lorenz(lambda p: p, 2.0)
    assert m == pytest.approx(2.0, rel=1e-9)
    locs, _ = d.support_atoms()
    np.testing.assert_allclose(locs, [2.0], atol=1e-9)


def test_limit_from_vanishing_curve():
    d, m = limit_from_lorenz(lambda p: 0.0, 5.0)
    assert m == 0.0
    locs, masses = d.support_atoms()
    assert list(locs) == [0.0]


def test_limit_from_mass_escape_curve():
    # the shrunk limit of the second escape scenario: flat to 1/2, then
    # affine with slope 2/3 topping out at 1/3; mean scale 3/2
    def f(p):
        return 0.0 if p < 0.5 else (2.0 / 3.0) * p - 1.0 / 3.0

    d, m = limit_from_lorenz(f, 1.5)
    assert m == pytest.approx(0.5, rel=1e-9)
    assert w1(d, discrete([0.0, 1.0])) < 1e-9


def test_limit_from_lorenz_validation():
    with pytest.raises(ValueError, match="grid"):
        limit_from_lorenz(lambda p: p, 1.0, np.array([0.0, 0.5, 1.0]))
    with pytest.raises(ValueError, match="mean scale"):
        limit_from_lorenz(lambda p: p, -1.0)


# ---------------------------------------------------------------------------
# sequence diagnostics
# ---------------------------------------------------------------------------


def test_repeated_copies_converge_trivially():
    d = midpoint_atom_mixture()
    report = sequence_diagnostics([d] * 6, d)
    assert report.verdict == "w1_convergent"
    assert report.scheffe_verdict == "w1_convergent"
    for step in report.steps:
        assert step.w1_to_limit < 1e-9
        assert step.lorenz_sup_error < 1e-9
    assert report.limit_summary.mean == pytest.approx(d.mean)


def test_first_escape_scenario_is_weak_only():
    seq, limit = scenario_sequence("counterexample1", 30)
    report = sequence_diagnostics(seq, limit)
    assert report.verdict == "weak_only"
    assert report.verdict == report.scheffe_verdict
    # with u = 1/n^2 the exact indices are (1-u)^2/(2-u); they drift toward
    # 1/2, not toward the limit's 0
    n_last = 4 * 30
    u = 1.0 / n_last**2
    expected = (1.0 - u) ** 2 / (2.0 - u)
    assert report.steps[-1].gini == pytest.approx(expected, abs=1e-12)
    assert report.steps[-1].hoover == pytest.approx(expected, abs=1e-12)
    assert report.limit_summary.gini == 0.0


def test_second_escape_scenario_matches_frozen_oracle():
    seq, limit = scenario_sequence("counterexample2", 25)
    report = sequence_diagnostics(seq, limit)
    assert report.verdict == "weak_only"
    assert report.scheffe_verdict == "weak_only"
    # closed forms from scripts/oracle_mass_escape.py
    for k, step in enumerate(report.steps, start=1):
        u = 1.0 / (4 * k) ** 2
        assert step.gini == pytest.approx(
            (5.0 - 8.0 * u + 4.0 * u * u) / (6.0 - 4.0 * u), abs=1e-12
        )
        assert step.hoover == pytest.approx(
            (2.0 - 3.0 * u + 2.0 * u * u) / (3.0 - 2.0 * u), abs=1e-12
        )
    assert report.limit_summary.gini == pytest.approx(0.5)
    assert report.limit_summary.hoover == pytest.approx(0.5)


def test_oscillating_sequence_is_divergent():
    a, b = uniform(0.0, 1.0), uniform(1.0, 2.0)
    seq = [a if k % 2 == 0 else b for k in range(10)]
    report = sequence_diagnostics(seq, a)
    assert report.verdict == "divergent"
    assert report.scheffe_verdict == "divergent"


def test_shrinking_support_sequence_converges():
    seq = [uniform(0.0, 1.0 + 1.0 / n) for n in range(2, 41)]
    report = sequence_diagnostics(seq, uniform(0.0, 1.0))
    assert report.verdict == "w1_convergent"


def test_quantile_table_ladder_convergence_envelope():
    # deterministic w1_convergent sequence with known index errors:
    # the ladder of table approximations of U[0,1] has G = (l+1)/(3l),
    # so |G_l - 1/3| = 1/(3l)
    u = uniform(0.0, 1.0)
    sizes = (8, 16, 32, 64, 128, 256, 512)
    seq = [quantile_approx(u, ell) for ell in sizes]
    report = sequence_diagnostics(seq, u)
    assert report.verdict == "w1_convergent"
    g_err = [abs(s.gini - 1.0 / 3.0) for s in report.steps]
    h_err = [abs(s.hoover - 0.25) for s in report.steps]
    for ell, ge in zip(sizes, g_err):
        assert ge == pytest.approx(1.0 / (3.0 * ell), abs=1e-10)
    assert all(x >= y for x, y in zip(g_err, g_err[1:]))
    assert all(x >= y - 1e-12 for x, y in zip(h_err, h_err[1:]))
    assert g_err[-1] < 1e-3
    assert h_err[-1] < 1e-3
    assert report.steps[-1].lorenz_sup_error < 1e-3
    sup_errs = [s.lorenz_sup_error for s in report.steps]
    assert all(x >= y - 1e-12 for x, y in zip(sup_errs, sup_errs[1:]))


def test_custom_probe_ladder():
    d = uniform(0.0, 1.0)
    report = sequence_diagnostics([d] * 3, d, probes=[0.25, 0.5, 0.75])
    assert report.verdict == "w1_convergent"


def test_probe_validation():
    d = uniform(0.0, 1.0)
    with pytest.raises(ValueError, match="ladder"):
        sequence_diagnostics([d], d, probes=[])
    with pytest.raises(ValueError, match="ladder"):
        sequence_diagnostics([d], d, probes=[0.0, 0.5])
    with pytest.raises(ValueError):
        sequence_diagnostics([], d)


def test_report_serialization_shape():
    d = uniform(0.0, 1.0)
    report = sequence_diagnostics([d, d], d)
    payload = report.to_json_dict()
    assert set(payload) == {
        "steps", "limit_summary", "verdict", "deciding_diagnostic",
        "scheffe_verdict", "alpha_ref", "rel_tol",
    }
    assert len(payload["steps"]) == 2
    assert set(payload["steps"][0]) == {
        "index", "w1_to_limit", "mean", "gini", "hoover",
        "lorenz_sup_error", "ui_tail_at_alpha",
    }
    rows = report.tsv_rows()
    assert rows[0] == (
        "index", "w1_to_limit", "mean", "gini", "hoover",
        "lorenz_sup_error", "ui_tail_at_alpha",
    )
    assert len(rows) == 3
