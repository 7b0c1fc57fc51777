"""Closed-form estimator families, ML, and profile selection."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

import mckaygamma as mg
from mckaygamma import estimators as es
from mckaygamma import model, specfun
from mckaygamma.errors import (
    DegenerateStatisticsError,
    DomainError,
    EstimationError,
    NoValidEstimateError,
    NumericRangeError,
)
from mckaygamma.specfun import mix64

from conftest import SCENARIO_PARAMS

# Reference fits for the bundled rainfall data (alpha, beta, gamma); frozen
# regression anchors, tolerance 1e-3 per parameter.
RAIN_FITS = {
    "ml": (4.814062, 4.808138, 0.3213364),
    "zhao": (4.693702, 4.643815, 0.3118293),
    "nawa": (4.834165, 4.871643, 0.3241285),
    "proposed1": (4.790209, 4.709444, 0.3172439),  # at (r, s) = (0.1, 0.9)
    "proposed2": (4.841863, 4.838904, 0.3232923),  # at (r, s) = (1.2, 1.2)
}
RAIN_ML_LOGLIK = -770.9414

# Direct three-point estimate, 50-digit mpmath arithmetic on the closed form.
COMPANION_3PT = (7.8389149679811034, 19.214217274153674, 8.1159396726404332)

# Ratio statistics A..F for pairs {(1,2), (3,4)} at (r, s) = (2, 0.5), same
# mpmath source.
RATIO_STATS_REF = {
    "a": -0.49041462650586312,
    "b": -0.77809669895764405,
    "c": -0.75300922047163114,
    "d": -1.3959814440595506,
    "e": -0.61367096942856623,
    "f": -0.55718032281812443,
}

# Population means of the nine identity-family statistics at
# (alpha, beta, gamma) = (1.7, 2.5, 1.1), from the closed-form expectations
# (digamma/mpmath, 50 digits).  Feeding them to the assembly map must return
# the generating parameters.
POP_Z = np.array(
    [
        3.8181818181818182,
        0.1132376950691691,
        0.0,
        0.1132376950691691,
        0.79500272107839164,
        1.2160287114822747,
        0.0,
        2.5941945844955194,
        5.5521096256595944,
    ]
)

LN2 = math.log(2.0)


def two_pair_sample():
    return mg.BivariateSample(np.array([1.0, 2.0]), np.array([2.0, 4.0]))


# ---------------------------------------------------------------------------
# transform maps
# ---------------------------------------------------------------------------


def test_identity_round_trip():
    pair = es.identity_pair()
    x = np.linspace(0.1, 50.0, 40)
    assert_allclose(pair.g1.forward(pair.g1.inverse(x)), x, rtol=1e-12)


@pytest.mark.parametrize("r", [0.3, 1.0, 2.5])
def test_exp_shift_round_trip(r):
    pair = es.exp_shift_pair(r, r)
    x = np.linspace(0.1, 50.0, 40)
    assert_allclose(pair.g1.forward(pair.g1.inverse(x)), x, rtol=1e-11)
    t = np.linspace(0.05, 3.0, 30)
    assert_allclose(pair.g1.inverse(pair.g1.forward(t)), t, rtol=1e-11)


def test_exp_shift_derivatives_consistent():
    g = es.exp_shift_pair(1.3, 1.0).g1
    t = np.linspace(0.1, 2.0, 15)
    h = 1e-6
    assert_allclose(g.deriv(t), (g.forward(t + h) - g.forward(t - h)) / (2 * h), rtol=1e-6)
    assert_allclose(g.deriv2(t), (g.deriv(t + h) - g.deriv(t - h)) / (2 * h), rtol=1e-5)


# ---------------------------------------------------------------------------
# first family: Z statistics and assembly
# ---------------------------------------------------------------------------


def test_summarize_z_identity_hand_computed():
    # pairs {(1,2), (2,4)}: all nine means reduce to multiples of ln 2
    z = es.summarize_z(two_pair_sample(), es.identity_pair())
    hand = [3.0, LN2 / 2, 0.0, LN2 / 2, LN2 / 2, 1.5 * LN2, 0.0, 3 * LN2, 5 * LN2]
    assert_allclose(z.as_array(), hand, rtol=0, atol=1e-14)


def test_identity_collapses_columns(corpus):
    # under the identity maps: V vanishes and W/x equals L
    _, sample = corpus[0]
    h = es.h_matrix(sample, es.identity_pair())
    assert np.all(h[:, 2] == 0.0) and np.all(h[:, 6] == 0.0)
    assert_allclose(h[:, 3], h[:, 1], rtol=1e-12)


def test_exp_shift_log_log_pivot():
    # at x = e^r - 1 the outer logarithm vanishes
    s = mg.BivariateSample(
        np.array([math.e - 1.0]), np.array([math.e**2 - 1.0])
    )
    z = es.summarize_z(s, es.exp_shift_pair(1.0, 1.0))
    assert abs(z.z2) < 1e-14


def test_z2_closed_form_shortcut(corpus):
    # z2 for the exp-shift map is mean(log(log1p(x)/r)) directly
    _, sample = corpus[4]
    r = 0.7
    z = es.summarize_z(sample, es.exp_shift_pair(r, 1.3))
    assert_allclose(z.z2, np.mean(np.log(np.log1p(sample.x) / r)), rtol=1e-12)


def test_assembly_recovers_parameters_from_population_means():
    alpha, beta, gamma = es.estimate_from_z(POP_Z)
    assert_allclose([alpha, beta, gamma], [1.7, 2.5, 1.1], rtol=1e-9)


def test_assembly_rejects_degenerate_inputs():
    bad = POP_Z.copy()
    bad[3] = 0.0  # alpha denominator
    with pytest.raises(DegenerateStatisticsError):
        es.estimate_from_z(bad)
    bad = POP_Z.copy()
    bad[0] = -1.0  # mean of y
    with pytest.raises(DegenerateStatisticsError):
        es.estimate_from_z(bad)


def test_assembly_consistency_large_sample():
    params = mg.McKayParams(1.7, 1.5, 1.1)
    s = mg.sample_mckay(params, 10**6, mix64(11, 0))
    out = es.estimate_from_z(es.summarize_z(s, es.identity_pair()).as_array())
    assert_allclose(out, params.as_array(), atol=0.02)


# ---------------------------------------------------------------------------
# direct closed-form estimators
# ---------------------------------------------------------------------------


def test_zhao_three_point_oracle():
    s = mg.BivariateSample(np.array([1.0, 2.0, 0.6]), np.array([3.0, 5.0, 2.0]))
    fit = es.estimate_zhao(s)
    assert_allclose(
        [fit.alpha, fit.beta, fit.gamma_rate], COMPANION_3PT, rtol=1e-12
    )
    assert fit.method == "zhao" and fit.converged


def test_zhao_degenerate_log_mean():
    # mean(ln x) = ln 1 + ln 2 + ln 0.5 = 0 exactly, so the alpha denominator
    # vanishes and the estimate must be refused rather than returned as inf
    s = mg.BivariateSample(np.array([1.0, 2.0, 0.5]), np.array([3.0, 5.0, 2.0]))
    with pytest.raises(DegenerateStatisticsError):
        es.estimate_zhao(s)


def test_zhao_equals_identity_machinery(corpus):
    worst = 0.0
    for _, sample in corpus:
        direct = es.estimate_zhao(sample)
        generic = es.estimate_from_z(
            es.summarize_z(sample, es.identity_pair()).as_array()
        )
        worst = max(
            worst,
            abs(direct.alpha - generic[0]),
            abs(direct.beta - generic[1]),
            abs(direct.gamma_rate - generic[2]),
        )
    assert worst < 1e-10


def test_nawa_equals_ratio_machinery(corpus):
    worst = 0.0
    for _, sample in corpus:
        direct = es.estimate_nawa(sample)
        generic = es.estimate_from_u(es.summarize_u(sample, es.nawa_pair()))
        worst = max(
            worst,
            abs(direct.alpha - generic[0]),
            abs(direct.beta - generic[1]),
            abs(direct.gamma_rate - generic[2]),
        )
    assert worst < 1e-10


def test_ratio_statistics_frozen_oracle():
    s = mg.BivariateSample(np.array([1.0, 3.0]), np.array([2.0, 4.0]))
    sr = es.summarize_ratio(s, 2.0, 0.5)
    for name, ref in RATIO_STATS_REF.items():
        assert_allclose(getattr(sr, name), ref, rtol=1e-12)


def test_proposed2_generalizes_ratio_machinery(corpus):
    # replacing the direct E statistic by its generic counterpart reproduces
    # the power-family machinery estimate
    for _, sample in corpus[:8]:
        r, s = 1.4, 0.6
        sr = es.summarize_ratio(sample, r, s)
        w = sample.x / sample.y
        lw = np.log(w)
        t = -np.expm1(r * lw)
        e_generic = float(np.mean((r - t - r * s * np.exp(r * lw)) / np.exp(r * lw) * np.log(t)))
        assembled = es.assemble_ratio(
            sr.a, sr.b, sr.c, sr.d, e_generic, sr.f, r, s, float(np.mean(sample.y))
        )
        generic = es.estimate_from_u(es.summarize_u(sample, es.power_ratio_pair(r, s)))
        assert_allclose(assembled, generic, atol=1e-8)


def test_proposed2_weighting_coincides_at_unit_orders(corpus):
    # at (r, s) = (1, 1) the direct statistic and the generic one agree ...
    _, sample = corpus[2]
    fit = es.estimate_proposed2(sample, 1.0, 1.0)
    generic = es.estimate_from_u(es.summarize_u(sample, es.power_ratio_pair(1.0, 1.0)))
    assert_allclose([fit.alpha, fit.beta, fit.gamma_rate], generic, atol=1e-10)
    # ... away from it they are different statistics by design
    sr = es.summarize_ratio(sample, 2.0, 0.5)
    w = sample.x / sample.y
    lw = np.log(w)
    t = -np.expm1(2.0 * lw)
    e_generic = float(np.mean((2.0 - t - 1.0 * np.exp(2.0 * lw)) / np.exp(2.0 * lw) * np.log(t)))
    assert abs(sr.e - e_generic) > 1e-3


def test_proposed1_large_sample_consistency():
    params = mg.McKayParams(3.0, 1.0, 2.0)
    s = mg.sample_mckay(params, 10**6, mix64(11, 1, 4))
    fit = es.estimate_proposed1(s, 1.0, 1.0)
    assert_allclose(
        [fit.alpha, fit.beta, fit.gamma_rate], params.as_array(), atol=0.03
    )


def test_proposed1_overflow_reported():
    big = mg.BivariateSample(np.array([1e307, 5e306]), np.array([2e307, 1.5e307]))
    with pytest.raises(NumericRangeError):
        es.estimate_proposed1(big, 1.0, 1.0)


@pytest.mark.parametrize("method", sorted(RAIN_FITS))
def test_rainfall_reference_fits(method, rainfall):
    if method == "proposed1":
        fit = es.estimate_proposed1(rainfall, 0.1, 0.9)
    elif method == "proposed2":
        fit = es.estimate_proposed2(rainfall, 1.2, 1.2)
    else:
        fit = getattr(es, f"estimate_{method}")(rainfall)
    assert_allclose(
        [fit.alpha, fit.beta, fit.gamma_rate], RAIN_FITS[method], rtol=0, atol=1e-3
    )
    assert np.isfinite(fit.loglik)


# ---------------------------------------------------------------------------
# maximum likelihood
# ---------------------------------------------------------------------------


def test_ml_rainfall_loglik(rainfall):
    fit = es.estimate_ml(rainfall)
    assert fit.converged and fit.iterations >= 1
    assert_allclose(fit.loglik, RAIN_ML_LOGLIK, rtol=0, atol=0.01)
    assert_allclose(
        fit.loglik, model.log_likelihood(fit.params, rainfall), rtol=1e-9
    )


def test_ml_score_vanishes(corpus, rainfall):
    # at the ML fit the three likelihood equations hold to near machine level
    for sample in [rainfall] + [s for _, s in corpus[:6]]:
        fit = es.estimate_ml(sample)
        if not fit.converged:
            continue
        a, b, g = fit.alpha, fit.beta, fit.gamma_rate
        eq1 = math.log(g) - specfun.digamma(a) + np.mean(np.log(sample.x))
        eq2 = math.log(g) - specfun.digamma(b) + np.mean(np.log(sample.y - sample.x))
        eq3 = (a + b) / g - np.mean(sample.y)
        assert max(abs(eq1), abs(eq2), abs(eq3)) < 1e-8


def test_ml_large_sample_consistency():
    params = mg.McKayParams(1.2, 3.5, 1.5)
    s = mg.sample_mckay(params, 10**5, mix64(11, 2))
    fit = es.estimate_ml(s)
    assert fit.converged
    assert_allclose(
        [fit.alpha, fit.beta, fit.gamma_rate], params.as_array(), atol=0.05
    )


def test_ml_dominates_closed_forms(corpus):
    # the ML objective value is the maximum, so no closed-form fit may beat it
    for _, sample in corpus:
        ml = es.estimate_ml(sample)
        assert ml.converged
        for other in (
            es.estimate_zhao(sample),
            es.estimate_nawa(sample),
            es.estimate_proposed1(sample, 1.0, 1.0),
            es.estimate_proposed2(sample, 1.2, 0.8),
        ):
            if other.params is None or not np.isfinite(other.loglik):
                continue
            assert other.loglik <= ml.loglik + 1e-6


def test_ml_reports_nonconvergence(rainfall):
    fit = es.estimate_ml(rainfall, max_iter=1)
    assert not fit.converged
    assert fit.iterations == 1
    assert np.isfinite(fit.alpha)


def test_ml_rejects_vanishing_gaps():
    # a pair with y - x in the denormal range would push ln(y - x) out of reach
    s = mg.BivariateSample(np.array([5e-301, 1.0]), np.array([9e-301, 2.0]))
    with pytest.raises(DomainError):
        es.estimate_ml(s)


# ---------------------------------------------------------------------------
# shared estimator properties
# ---------------------------------------------------------------------------

ALL_FITS = {
    "ml": es.estimate_ml,
    "zhao": es.estimate_zhao,
    "nawa": es.estimate_nawa,
    "proposed1": lambda s: es.estimate_proposed1(s, 1.0, 1.0),
    "proposed2": lambda s: es.estimate_proposed2(s, 1.2, 0.8),
}


@pytest.mark.parametrize("name", sorted(ALL_FITS))
def test_estimators_require_two_pairs(name):
    one = mg.BivariateSample(np.array([1.0]), np.array([2.0]))
    with pytest.raises(DomainError):
        ALL_FITS[name](one)


@pytest.mark.parametrize("name", sorted(ALL_FITS))
def test_permutation_invariance(name, rainfall):
    rng = np.random.default_rng(3)
    perm = rng.permutation(rainfall.n)
    shuffled = mg.BivariateSample(rainfall.x[perm], rainfall.y[perm])
    a = ALL_FITS[name](rainfall)
    b = ALL_FITS[name](shuffled)
    assert (a.alpha, a.beta, a.gamma_rate) == (b.alpha, b.beta, b.gamma_rate)


@pytest.mark.parametrize(
    "name, fit",
    [
        ("ml", es.estimate_ml),
        ("nawa", es.estimate_nawa),
        ("proposed2", lambda s: es.estimate_proposed2(s, 1.2, 1.2)),
    ],
)
def test_scale_equivariance(name, fit, rainfall):
    # rescaling the data leaves the shapes fixed and divides the rate
    c = 7.3
    scaled = mg.BivariateSample(rainfall.x * c, rainfall.y * c)
    a, b = fit(rainfall), fit(scaled)
    assert_allclose(b.alpha, a.alpha, rtol=1e-12)
    assert_allclose(b.beta, a.beta, rtol=1e-12)
    assert_allclose(b.gamma_rate * c, a.gamma_rate, rtol=1e-12)


def test_consistency_under_growing_samples():
    # every method, every parameter set: RMSE shrinks from n=100 to n=10000
    from mckaygamma import montecarlo as mc

    for i, params in enumerate(SCENARIO_PARAMS):
        rows = {}
        for n in (100, 10_000):
            scen = mc.Scenario(params=params, n=n, m=50, index=i, label=str(i + 1))
            rows[n] = mc.run_scenario(scen, base_seed=9).rows
        for row_small, row_big in zip(rows[100], rows[10_000]):
            assert row_big.method == row_small.method
            assert row_big.param == row_small.param
            if np.isfinite(row_big.rmse) and np.isfinite(row_small.rmse):
                assert row_big.rmse < row_small.rmse


# ---------------------------------------------------------------------------
# profile selection
# ---------------------------------------------------------------------------


def test_default_grid():
    grid = np.asarray(es.DEFAULT_GRID)
    assert grid.size == 25
    assert_allclose(grid, np.arange(1, 26) / 10.0, rtol=0, atol=1e-12)


def test_profile_singleton_grid_matches_direct(rainfall):
    fit = es.profile_select(rainfall, "proposed1", grid_r=(1.0,), grid_s=(1.0,))
    direct = es.estimate_proposed1(rainfall, 1.0, 1.0)
    assert (fit.r, fit.s) == (1.0, 1.0)
    assert fit.profile_skipped == 0
    assert_allclose(
        [fit.alpha, fit.beta, fit.gamma_rate],
        [direct.alpha, direct.beta, direct.gamma_rate],
        rtol=1e-12,
    )


@pytest.mark.parametrize("family", ["proposed1", "proposed2"])
def test_profile_matches_bruteforce_small_grid(family, corpus):
    _, sample = corpus[1]
    grid = (0.5, 1.0, 1.5)
    fit = es.profile_select(sample, family, grid_r=grid, grid_s=grid)
    direct = {
        "proposed1": es.estimate_proposed1,
        "proposed2": es.estimate_proposed2,
    }[family]
    best = None
    for r in grid:
        for s in grid:
            try:
                cand = direct(sample, r, s)
            except (EstimationError, NumericRangeError):
                continue
            if cand.params is None or not np.isfinite(cand.loglik):
                continue
            if best is None or cand.loglik > best.loglik:
                best = cand
    assert (fit.r, fit.s) == (best.r, best.s)
    assert_allclose(fit.loglik, best.loglik, rtol=1e-12)


def test_profile_grid_order_irrelevant(rainfall):
    a = es.profile_select(rainfall, "proposed2", grid_r=(1.5, 0.5), grid_s=(1.2, 0.7))
    b = es.profile_select(rainfall, "proposed2", grid_r=(0.5, 1.5), grid_s=(0.7, 1.2))
    assert (a.r, a.s) == (b.r, b.s)
    assert a.alpha == b.alpha


def test_profile_rainfall_selections(rainfall):
    p1 = es.profile_select(rainfall, "proposed1")
    p2 = es.profile_select(rainfall, "proposed2")
    assert (p1.r, p1.s) == (0.1, 0.9)
    assert (p2.r, p2.s) == (1.2, 1.2)


def test_profile_all_candidates_invalid():
    big = mg.BivariateSample(np.array([1e307, 5e306]), np.array([2e307, 1.5e307]))
    with pytest.raises(NoValidEstimateError):
        es.profile_select(big, "proposed1", grid_r=(0.5, 1.0), grid_s=(0.5, 1.0))


def test_profile_rejects_unknown_family(rainfall):
    with pytest.raises(DomainError):
        es.profile_select(rainfall, "zhao")
