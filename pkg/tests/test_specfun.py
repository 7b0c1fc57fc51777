"""Special functions and the deterministic RNG layer."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from mckaygamma import specfun
from mckaygamma.errors import DomainError

EULER_GAMMA = 0.5772156649015329


@pytest.mark.parametrize(
    "a, expected",
    [
        (1.0, 0.0),
        (2.0, 0.0),
        (5.0, math.log(24.0)),
        (0.5, 0.5 * math.log(math.pi)),  # Gamma(1/2) = sqrt(pi)
    ],
)
def test_log_gamma_exact_points(a, expected):
    assert_allclose(specfun.log_gamma(a), expected, rtol=0, atol=1e-12)


def test_digamma_and_trigamma_at_one():
    assert_allclose(specfun.digamma(1.0), -EULER_GAMMA, atol=1e-12)
    assert_allclose(specfun.trigamma(1.0), math.pi**2 / 6.0, atol=1e-12)


def test_digamma_recurrence():
    # psi(a + 1) = psi(a) + 1/a
    for a in (0.3, 1.7, 5.0, 50.0):
        assert_allclose(
            specfun.digamma(a + 1.0), specfun.digamma(a) + 1.0 / a, rtol=1e-12
        )


@pytest.mark.parametrize("a", [0.3, 1.7, 5.0, 50.0])
def test_digamma_matches_log_gamma_derivative(a):
    h = 1e-5 * max(1.0, a)
    central = (specfun.log_gamma(a + h) - specfun.log_gamma(a - h)) / (2 * h)
    assert_allclose(specfun.digamma(a), central, atol=1e-5, rtol=1e-5)


@pytest.mark.parametrize("a", [0.3, 1.7, 5.0, 50.0])
def test_trigamma_matches_digamma_derivative(a):
    h = 1e-5 * max(1.0, a)
    central = (specfun.digamma(a + h) - specfun.digamma(a - h)) / (2 * h)
    assert_allclose(specfun.trigamma(a), central, atol=1e-5, rtol=1e-5)


def test_reg_gamma_p_shape_one_is_exponential_cdf():
    x = np.array([0.1, 0.5, 1.0, 2.5, 10.0])
    assert_allclose(specfun.reg_gamma_p(1.0, x), -np.expm1(-x), rtol=1e-12)


def test_reg_gamma_p_half_is_erf():
    # P(1/2, x) = erf(sqrt(x)); at x=1: erf(1)
    assert_allclose(specfun.reg_gamma_p(0.5, 1.0), math.erf(1.0), rtol=1e-12)


def test_reg_gamma_p_limits_and_monotonicity():
    x = np.linspace(0.01, 30.0, 200)
    p = specfun.reg_gamma_p(2.3, x)
    assert np.all(np.diff(p) > 0)
    assert p[0] > 0.0 and p[-1] < 1.0
    assert specfun.reg_gamma_p(2.3, 0.0) == 0.0


@pytest.mark.parametrize(
    "call",
    [
        lambda: specfun.log_gamma(0.0),
        lambda: specfun.log_gamma(-1.5),
        lambda: specfun.digamma(0.0),
        lambda: specfun.digamma(-2.0),
        lambda: specfun.trigamma(0.0),
        lambda: specfun.reg_gamma_p(0.0, 1.0),
        lambda: specfun.reg_gamma_p(-1.0, 1.0),
        lambda: specfun.reg_gamma_p(1.0, -0.5),
    ],
)
def test_domain_errors(call):
    with pytest.raises(DomainError):
        call()


def test_scalar_in_scalar_out():
    assert np.isscalar(specfun.log_gamma(2.5))
    assert np.isscalar(specfun.digamma(2.5))
    assert np.isscalar(specfun.trigamma(2.5))
    assert np.isscalar(specfun.reg_gamma_p(2.5, 1.0))
    out = specfun.log_gamma(np.array([1.0, 2.0]))
    assert isinstance(out, np.ndarray) and out.shape == (2,)


def test_mix64_determinism_and_spread():
    a = specfun.mix64(1, 2, 3)
    assert a == specfun.mix64(1, 2, 3)
    assert a != specfun.mix64(1, 2, 4)
    assert a != specfun.mix64(1, 3, 2)  # order matters
    assert 0 <= a < 2**64


def test_substream_reproducible_and_distinct():
    r1 = specfun.substream(42, 0).random(5)
    r2 = specfun.substream(42, 0).random(5)
    r3 = specfun.substream(42, 1).random(5)
    assert np.array_equal(r1, r2)
    assert not np.array_equal(r1, r3)


@pytest.mark.parametrize("shape, rate", [(0.5, 1.0), (2.0, 3.0), (10.0, 0.25)])
def test_gamma_sample_moments(shape, rate):
    rng = specfun.substream(29, int(shape * 10))
    draws = specfun.gamma_sample(shape, rate, rng, 10**6)
    assert np.all(draws > 0)
    mean, var = shape / rate, shape / rate**2
    se_mean = math.sqrt(var / draws.size)
    assert abs(draws.mean() - mean) < 4 * se_mean
    # Var of the sample variance ~ (m4 - var^2)/n with m4 = 3(2+shape)var^2/shape
    se_var = math.sqrt((3.0 * (2.0 + shape) / shape - 1.0) * var**2 / draws.size)
    assert abs(draws.var(ddof=1) - var) < 4 * se_var
