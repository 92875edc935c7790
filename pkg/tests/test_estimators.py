import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from relalter.estimators import FrameAlteration, SeparatedModes
from relalter.exceptions import InvalidInputError, NegativeQuantityError
from relalter.metric import AlterationFactor, CODATA_2018


def test_get_params_and_clone():
    est = SeparatedModes(n_points=50, n_modes=3)
    params = est.get_params()
    assert params["n_points"] == 50 and params["kind"] == "laplacian"
    assert clone(est).get_params() == params


def test_fit_attributes():
    est = SeparatedModes(n_points=1000, n_modes=5).fit()
    assert est.eigenvalues_[0] == pytest.approx(-math.pi**2, rel=1e-3)
    assert est.components_.shape == (5, 1000)
    assert np.allclose(est.components_ @ est.components_.T, np.eye(5), atol=1e-12)


def test_transform_round_trip():
    est = SeparatedModes(n_points=64, n_modes=64).fit()
    X = np.random.default_rng(0).normal(size=(3, 64))
    assert np.allclose(est.inverse_transform(est.transform(X)), X, atol=1e-12)


def test_transform_picks_out_mode():
    est = SeparatedModes(n_points=100, n_modes=4).fit()
    coeffs = est.transform(est.components_[2][None, :])
    assert np.allclose(coeffs, [[0, 0, 1, 0]], atol=1e-12)


def test_not_fitted():
    with pytest.raises(NotFittedError):
        SeparatedModes().transform(np.zeros((1, 100)))


def test_verify_and_m_frame():
    est = SeparatedModes(kind="schrodinger_with_potential", potential=1.0, n_points=200, n_modes=3).fit()
    reports = est.verify(AlterationFactor.from_gamma(0.9))
    assert all(r.passed for r in reports)
    assert np.allclose(est.m_frame_eigenvalues(AlterationFactor.from_gamma(0.9)), 0.9 * est.eigenvalues_, rtol=1e-15)


def test_custom_matrix():
    est = SeparatedModes(kind="custom_matrix", matrix=np.diag([1.0, 3.0, 2.0]), n_modes=2).fit()
    assert np.array_equal(est.eigenvalues_, [3.0, 2.0])


def test_frame_alteration_frequency():
    fa = FrameAlteration(quantity="frequency_Hz", gamma=0.8).fit()
    assert np.allclose(fa.transform([[1e15, 2e15]]), [[8e14, 1.6e15]], rtol=1e-15)
    assert np.allclose(fa.inverse_transform(fa.transform([[1e15]])), [[1e15]], rtol=1e-15)


def test_frame_alteration_mass_and_velocity():
    fa = FrameAlteration(quantity="mass_kg", velocity=0.6 * CODATA_2018.c).fit([[1.0]])
    assert fa.factor_.gamma == pytest.approx(0.8)
    assert fa.transform([[1.0]])[0, 0] == pytest.approx(1.25)
    with pytest.raises(NegativeQuantityError):
        fa.transform([[-1.0]])


def test_frame_alteration_gravitational():
    fa = FrameAlteration(source_mass=5.9722e24, source_radius=6.3710e6).fit()
    assert 1 - fa.factor_.lam == pytest.approx(1.392e-9, rel=5e-3)


@pytest.mark.parametrize("kwargs", [{}, {"gamma": 0.5, "velocity": 1.0}, {"source_mass": 1.0}])
def test_frame_alteration_source(kwargs):
    with pytest.raises(InvalidInputError):
        FrameAlteration(**kwargs).fit()


def test_pipeline():
    pipe = make_pipeline(SeparatedModes(n_points=30, n_modes=5), FrameAlteration(quantity="energy_J", gamma=0.5))
    X = np.random.default_rng(2).normal(size=(4, 30))
    out = pipe.fit(X).transform(X)
    assert out.shape == (4, 5)
    assert np.allclose(out, 0.5 * pipe[0].transform(X))
