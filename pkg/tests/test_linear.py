import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boilrange.dataset import Dataset, Standardizer, split
from boilrange.exceptions import ArityMismatchError, TooFewRowsError
from boilrange.linear import LinearRegressor, fit_ols, predict_linear

from conftest import IBP
from oracles import ridge_normal_equations


def _exact_affine(n=6):
    x1 = np.arange(n, dtype=float) * 1.5 + 3.0
    X = np.column_stack([x1] + [np.full(n, 4.0 + j) for j in range(8)])
    return Dataset(X, {IBP: 2.0 * x1 + 1.0})


def test_recovers_slope_and_intercept():
    m = fit_ols(_exact_affine(), IBP, 0.0)
    assert not m.ridge_fallback_  # constant columns are dropped, not ridged
    assert abs(m.raw_coef_[0] - 2.0) < 1e-8
    np.testing.assert_allclose(m.raw_coef_[1:], 0.0, atol=1e-12)
    # intercept in raw units, constant columns contribute nothing
    x0 = np.zeros(9)
    x0[1:] = 4.0 + np.arange(8)
    assert abs(predict_linear(m, x0) - 1.0) < 1e-8


def test_interpolates_training_points():
    ds = _exact_affine()
    m = fit_ols(ds, IBP)
    for x, y in zip(ds.X, ds.y(IBP)):
        assert abs(predict_linear(m, x) - y) < 1e-8


@pytest.mark.parametrize("seed", range(5))
def test_matches_normal_equations_oracle(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(14, 9)) * rng.uniform(0.5, 20, size=9) + rng.uniform(0, 50, size=9)
    y = rng.normal(140, 3, size=14)
    m = LinearRegressor(ridge=0.0).fit(X, y)
    assert not m.ridge_fallback_
    w, b, _ = ridge_normal_equations(X.tolist(), y.tolist(), 0.0)
    np.testing.assert_allclose(m.coef_, w, rtol=1e-8, atol=0)
    assert abs(m.intercept_ - b) <= 1e-8 * abs(b)


def test_duplicate_columns_fall_back_to_ridge():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(14, 9))
    X[:, 4] = X[:, 2]
    y = X @ rng.normal(size=9) + 140
    m = LinearRegressor(ridge=0.0).fit(X, y)
    assert m.ridge_fallback_ and m.ridge_used_ == 1e-8
    w, b, Z = ridge_normal_equations(X.tolist(), y.tolist(), 1e-8)
    oracle_resid = y - (np.array(Z) @ np.array(w) + b)
    np.testing.assert_allclose(y - m.predict(X), oracle_resid, atol=1e-8, rtol=0)


def test_constant_model():
    m = LinearRegressor()
    m.standardizer_ = Standardizer.identity()
    m.coef_ = np.zeros(9)
    m.intercept_ = 140.0
    m.n_features_in_ = 9
    for x in np.random.default_rng(0).normal(size=(5, 9)) * 100:
        assert predict_linear(m, x) == 140.0


def test_prediction_is_dot_product(rng):
    X = rng.normal(size=(14, 9))
    m = LinearRegressor().fit(X, rng.normal(size=14))
    x = rng.normal(size=9)
    z = [(x[j] - m.standardizer_.mean_[j]) / m.standardizer_.scale_[j] for j in range(9)]
    expected = m.intercept_
    for j in range(9):
        expected += m.coef_[j] * z[j]
    assert abs(predict_linear(m, x) - expected) < 1e-12


def test_noiseless_affine_test_rms(affine22):
    sp = split(affine22, 14, 7)
    m = fit_ols(sp.train, IBP)
    resid = m.predict(sp.test.X) - sp.test.y(IBP)
    assert np.sqrt(np.mean(resid**2)) < 1e-6


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32))
def test_residuals_orthogonal_to_features(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(14, 9))
    y = rng.normal(size=14) * 5 + 140
    m = LinearRegressor().fit(X, y)
    Z = m.standardizer_.transform(X)
    r = y - m.predict(X)
    assert np.all(np.abs(Z.T @ r) < 1e-8)
    assert abs(r.sum()) < 1e-8


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32), ridge=st.floats(1e-6, 1e3))
def test_ridge_shrinks_weights(seed, ridge):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(14, 9))
    y = rng.normal(size=14)
    w0 = LinearRegressor(0.0).fit(X, y).coef_
    w1 = LinearRegressor(ridge).fit(X, y).coef_
    assert np.linalg.norm(w1) <= np.linalg.norm(w0) * (1 + 1e-12)


def test_errors():
    with pytest.raises(TooFewRowsError):
        LinearRegressor().fit(np.ones((1, 9)), [1.0])
    with pytest.raises(ValueError):
        LinearRegressor(ridge=-1).fit(np.eye(9), np.ones(9))
    m = LinearRegressor().fit(np.random.default_rng(0).normal(size=(14, 9)), np.arange(14.0))
    with pytest.raises(ArityMismatchError):
        predict_linear(m, np.ones(8))
