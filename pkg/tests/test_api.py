"""Estimator/transformer wrappers following scikit-learn conventions."""

import numpy as np
import pytest
from numpy.testing import assert_allclose
from sklearn.base import clone

import mckaygamma as mg
from mckaygamma import estimators, model
from mckaygamma.api import McKayGammaEstimator, RosenblattTransform
from mckaygamma.errors import DomainError


def as_matrix(sample):
    return np.column_stack([sample.x, sample.y])


@pytest.fixture(scope="module")
def xy():
    return as_matrix(mg.sample_mckay(mg.McKayParams(1.7, 1.5, 1.1), 400, 808))


def test_fit_ml_default(xy):
    est = McKayGammaEstimator().fit(xy)
    ref = estimators.estimate_ml(
        mg.BivariateSample(xy[:, 0], xy[:, 1])
    )
    assert est.alpha_ == ref.alpha
    assert est.beta_ == ref.beta
    assert est.gamma_rate_ == ref.gamma_rate
    assert est.converged_
    assert est.n_features_in_ == 2


def test_fit_each_method(rainfall):
    xy = as_matrix(rainfall)
    for method in ("ml", "zhao", "nawa"):
        est = McKayGammaEstimator(method=method).fit(xy)
        assert est.converged_
    est = McKayGammaEstimator(method="proposed2", r=1.2, s=1.2).fit(xy)
    assert_allclose(est.alpha_, 4.841863, atol=1e-3)
    est = McKayGammaEstimator(method="proposed1", profile=True).fit(xy)
    assert (est.r_, est.s_) == (0.1, 0.9)


def test_score_is_mean_log_likelihood(xy):
    est = McKayGammaEstimator().fit(xy)
    sample = mg.BivariateSample(xy[:, 0], xy[:, 1])
    expected = model.log_likelihood(est.params_, sample) / sample.n
    assert_allclose(est.score(xy), expected, rtol=1e-12)


def test_params_property_requires_fit(xy):
    est = McKayGammaEstimator()
    with pytest.raises(Exception):
        _ = est.params_
    est.fit(xy)
    assert isinstance(est.params_, mg.McKayParams)


def test_get_set_params_round_trip():
    est = McKayGammaEstimator(method="proposed2", r=1.2, s=0.8)
    params = est.get_params()
    assert params["method"] == "proposed2" and params["r"] == 1.2
    est2 = McKayGammaEstimator().set_params(**params)
    assert est2.get_params() == params


def test_clone_preserves_configuration():
    est = clone(McKayGammaEstimator(method="nawa"))
    assert est.get_params()["method"] == "nawa"


def test_invalid_method_raises(xy):
    with pytest.raises(DomainError):
        McKayGammaEstimator(method="bogus").fit(xy)


def test_wrong_shape_rejected():
    with pytest.raises((DomainError, ValueError)):
        McKayGammaEstimator().fit(np.ones((10, 3)))
    with pytest.raises((DomainError, ValueError)):
        McKayGammaEstimator().fit(np.ones((1, 2)))


def test_transform_with_given_parameters(xy):
    params = mg.McKayParams(1.7, 1.5, 1.1)
    tr = RosenblattTransform(params=params).fit(xy)
    out = tr.transform(xy)
    sample = mg.BivariateSample(xy[:, 0], xy[:, 1])
    u1, u2 = model.rosenblatt(params, sample)
    assert_allclose(out, np.column_stack([u1, u2]), rtol=1e-12)
    assert np.all((out > 0) & (out < 1))


def test_transform_fits_when_parameters_missing(xy):
    tr = RosenblattTransform().fit(xy)
    est = McKayGammaEstimator().fit(xy)
    assert tr.params_.alpha == est.params_.alpha
    out = tr.fit_transform(xy)
    assert out.shape == (xy.shape[0], 2)
