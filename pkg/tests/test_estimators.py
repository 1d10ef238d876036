"""Sample-side estimators, kernel smoothing, and experiment drivers."""

import json
import math

import numpy as np
import pytest
from scipy.special import ndtr

from lorenzkit import (
    ZeroMeanError,
    atom,
    gini_mean_difference,
    hoover_mean_deviation,
    lognormal,
    lorenz,
    uniform,
    w1,
)
from lorenzkit.estimators import (
    EPANECHNIKOV,
    GAUSSIAN,
    KERNELS,
    ExperimentSpec,
    SampleSet,
    as_sample_set,
    empirical,
    estimate_gini,
    estimate_hoover,
    estimate_lorenz_at,
    kde,
    quantile_approx,
    quantile_of_sample,
    read_sample_csv,
    run_experiment,
)


# ---------------------------------------------------------------------------
# plug-in index estimators
# ---------------------------------------------------------------------------


def test_gini_of_tiny_sample():
    # pairs of (1,2,3): sum |i-j| = 8 over 9 pairs, mean 2, so G = 2/9
    assert estimate_gini([1.0, 2.0, 3.0]) == pytest.approx(2.0 / 9.0, abs=1e-15)


def test_hoover_of_tiny_sample():
    assert estimate_hoover([0.0, 0.0, 1.0, 3.0]) == pytest.approx(0.5, abs=1e-15)


def test_lorenz_values_by_fractional_indexing():
    s = [1.0, 1.0, 2.0]
    assert estimate_lorenz_at(s, 1.0 / 3.0) == pytest.approx(0.25, abs=1e-12)
    assert estimate_lorenz_at(s, 0.5) == pytest.approx(0.375, abs=1e-12)
    assert estimate_lorenz_at(s, 0.0) == 0.0
    assert estimate_lorenz_at(s, 1.0) == 1.0
    vec = estimate_lorenz_at(s, np.array([0.0, 1.0 / 3.0, 1.0]))
    np.testing.assert_allclose(vec, [0.0, 0.25, 1.0], atol=1e-12)
    with pytest.raises(ValueError, match=r"\[0, 1\]"):
        estimate_lorenz_at(s, 1.5)
    with pytest.raises(ZeroMeanError):
        estimate_lorenz_at([0.0, 0.0], 0.5)


def test_estimators_agree_with_empirical_law():
    """The plug-in shortcuts are the exact indices of the atom measure."""
    rng = np.random.default_rng(3)
    s = rng.gamma(2.0, 1.5, size=37)
    d = empirical(s)
    assert estimate_gini(s) == pytest.approx(gini_mean_difference(d), abs=1e-12)
    assert estimate_hoover(s) == pytest.approx(hoover_mean_deviation(d), abs=1e-12)
    curve = lorenz(d)
    ps = np.linspace(0.0, 1.0, 17)
    np.testing.assert_allclose(estimate_lorenz_at(s, ps), curve.eval(ps), atol=1e-12)


# ---------------------------------------------------------------------------
# quantile tables
# ---------------------------------------------------------------------------


def test_quantile_table_of_uniform():
    u = uniform(0.0, 1.0)
    locs, masses = quantile_approx(u, 4).support_atoms()
    np.testing.assert_allclose(locs, [0.0, 0.25, 0.5, 0.75], atol=1e-12)
    np.testing.assert_allclose(masses, [0.25] * 4, atol=1e-15)
    one = quantile_approx(u, 1)
    assert w1(one, atom(0.0)) == 0.0


def test_quantile_table_cdf_sandwich():
    # the table's cdf dominates the source cdf by at most one cell of mass
    u = uniform(0.0, 1.0)
    for ell in (1, 2, 4, 16, 64):
        t = quantile_approx(u, ell)
        xs = np.linspace(0.0, 1.0, 257)
        gap = t.cdf(xs) - u.cdf(xs)
        assert np.all(gap >= -1e-12)
        assert np.all(gap <= 1.0 / ell + 1e-12)


def test_quantile_table_of_sample_uses_min_convention():
    # empirical cdf of (0,1,2,3) already reaches 1/2 at the point 1, so the
    # p = 1/2 table entry picks 1, not 2
    d = quantile_of_sample([0.0, 1.0, 2.0, 3.0], 2)
    locs, masses = d.support_atoms()
    np.testing.assert_allclose(locs, [0.0, 1.0], atol=1e-15)
    np.testing.assert_allclose(masses, [0.5, 0.5], atol=1e-15)


def test_full_size_table_reproduces_order_statistics():
    d = quantile_of_sample([3.0, 0.0, 2.0, 1.0], 4)
    locs, masses = d.support_atoms()
    np.testing.assert_allclose(locs, [0.0, 1.0, 2.0], atol=1e-15)
    np.testing.assert_allclose(masses, [0.5, 0.25, 0.25], atol=1e-15)


# ---------------------------------------------------------------------------
# kernel smoothing
# ---------------------------------------------------------------------------


def test_gaussian_kde_is_a_normal_window_plus_boundary_atom():
    xs = [0.3, 1.0, 2.7]
    h = 0.2
    d = kde(xs, "gaussian", h)
    for x in (0.5, 1.3, 2.0, 4.0):
        window = float(np.mean(ndtr((x - np.asarray(xs)) / h)))
        assert d.cdf(x) == pytest.approx(window, abs=1e-10)
    # mass pushed below zero is swept into an atom at the origin
    single = kde([1.0], "gaussian", 0.5)
    assert single.mass_at(0.0) == pytest.approx(float(ndtr(-2.0)), abs=1e-12)
    phi2 = math.exp(-2.0) / math.sqrt(2.0 * math.pi)
    assert single.mean == pytest.approx(ndtr(2.0) + 0.5 * phi2, abs=1e-10)


def test_uniform_kernel_cdf_and_mean():
    d = kde([1.0, 2.0, 3.0], "uniform", 0.5)
    assert d.cdf(1.0) == pytest.approx(1.0 / 6.0, abs=1e-12)
    assert d.cdf(2.0) == pytest.approx(0.5, abs=1e-12)
    assert d.cdf(3.0) == pytest.approx(5.0 / 6.0, abs=1e-12)
    assert d.mean == pytest.approx(2.0, abs=1e-10)


def test_epanechnikov_kernel_mean():
    assert kde([2.0], EPANECHNIKOV, 1.0).mean == pytest.approx(2.0, abs=1e-10)


def test_bandwidth_sweep_tightens_the_fit():
    target = lognormal(0.0, 0.5)
    rng = np.random.default_rng(7)
    s = target.sample(rng, 200)
    dists = [w1(kde(s, GAUSSIAN, h), target) for h in (0.4, 0.1, 0.025)]
    assert dists[0] > dists[1] > dists[2]
    assert dists[0] < 0.2


def test_kernel_lookup_and_validation():
    assert set(KERNELS) == {"epanechnikov", "gaussian", "uniform"}
    with pytest.raises(ValueError, match="unknown kernel 'triweight'"):
        kde([1.0], "triweight", 0.1)
    with pytest.raises(ValueError, match="bandwidth"):
        kde([1.0], "gaussian", 0.0)
    with pytest.raises(ValueError, match="bandwidth"):
        kde([1.0], "gaussian", float("inf"))


# ---------------------------------------------------------------------------
# sample containers and file input
# ---------------------------------------------------------------------------


def test_sample_set_validation():
    with pytest.raises(ValueError, match="at least one value"):
        SampleSet((), "t")
    with pytest.raises(ValueError, match="finite and >= 0"):
        SampleSet((-1.0,), "t")
    with pytest.raises(ValueError, match="finite and >= 0"):
        SampleSet((float("nan"),), "t")
    s = as_sample_set([1, 2], "unit test")
    assert s.values == (1.0, 2.0)
    assert s.provenance == "unit test"
    assert as_sample_set(s) is s


def test_read_sample_csv(tmp_path):
    p = tmp_path / "wages.csv"
    p.write_text("# survey extract\n1.5\n\n2.5\n4 # trailing note\n")
    s = read_sample_csv(str(p))
    assert s.values == (1.5, 2.5, 4.0)
    assert s.provenance == f"file:{p}"
    with pytest.raises(OSError):
        read_sample_csv(str(tmp_path / "missing.csv"))
    bad = tmp_path / "bad.csv"
    bad.write_text("1.0\ntwo\n")
    with pytest.raises(ValueError, match=r"bad\.csv:2: not a number: 'two'"):
        read_sample_csv(str(bad))


# ---------------------------------------------------------------------------
# experiment specs and drivers
# ---------------------------------------------------------------------------


def test_spec_json_round_trip():
    spec = ExperimentSpec(
        scheme="kde", source="lognormal(0,0.5)", seed=3, steps=4,
        bandwidths=(0.4, 0.2, 0.1, 0.05), kernel="uniform", rel_tol=0.02,
    )
    again = ExperimentSpec.from_json(json.dumps(spec.to_json_dict()))
    assert again == spec


def test_spec_rejects_unknown_keys():
    with pytest.raises(ValueError, match=r"unknown experiment keys: \['bogus'\]"):
        ExperimentSpec.from_json('{"scheme": "noise", "source": "atom(1)", "bogus": 3}')


def test_spec_scheme_and_pairing_validation():
    with pytest.raises(ValueError, match="unknown scheme 'nope'"):
        run_experiment(ExperimentSpec(scheme="nope", source="atom(1)"))
    with pytest.raises(ValueError, match="table_sizes must pair up"):
        run_experiment(ExperimentSpec(
            scheme="quantile_of_sample", source="atom(1)",
            sample_sizes=(10, 20), table_sizes=(2,),
        ))
    with pytest.raises(ValueError, match="bandwidths must pair up"):
        run_experiment(ExperimentSpec(
            scheme="kde", source="exp(1)",
            sample_sizes=(10, 20), bandwidths=(0.1,),
        ))
    with pytest.raises(ValueError, match="unknown kernel"):
        run_experiment(ExperimentSpec(scheme="kde", source="exp(1)", kernel="nope"))


def test_sampling_experiment_is_deterministic_and_converges():
    spec = ExperimentSpec(scheme="sampling", source="uniform(0,1)", seed=11, steps=8)
    r1 = run_experiment(spec)
    r2 = run_experiment(spec)
    assert r1.to_json_dict() == r2.to_json_dict()
    assert r1.verdict == "w1_convergent"
    assert abs(r1.steps[-1].gini - 1.0 / 3.0) < 0.02
    r3 = run_experiment(ExperimentSpec(scheme="sampling", source="uniform(0,1)", seed=12, steps=8))
    assert r3.steps[-1].gini != r1.steps[-1].gini


def test_quantile_experiment_controls_cdf_error():
    spec = ExperimentSpec(scheme="quantile", source="uniform(0,1)", steps=6)
    report = run_experiment(spec)
    assert report.verdict == "w1_convergent"
    u = uniform(0.0, 1.0)
    xs = np.linspace(0.0, 1.0, 513)
    for k in range(1, 7):
        ell = 2 ** (k + 1)
        t = quantile_approx(u, ell)
        assert float(np.max(t.cdf(xs) - u.cdf(xs))) <= 1.0 / ell + 1e-12


def test_noise_experiment_converges():
    spec = ExperimentSpec(scheme="noise", source="mix(0.3*atom(0),0.7*exp(1))", steps=6)
    assert run_experiment(spec).verdict == "w1_convergent"
