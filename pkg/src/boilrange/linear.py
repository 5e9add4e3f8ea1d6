"""Least-squares baseline ("Linear prediction")."""

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_features, check_training, target_arrays
from .dataset import Standardizer
from .exceptions import SingularSystemError

FALLBACK_RIDGE = 1e-8
# Normal matrices with a condition number above this are treated as singular.
SINGULAR_COND = 1e12


def solve_normal_equations(Xs, yc, ridge):
    """Solve ``(Xs'Xs + ridge*I) w = Xs'yc``; returns None when singular."""
    A = Xs.T @ Xs + ridge * np.eye(Xs.shape[1])
    b = Xs.T @ yc
    try:
        cond = np.linalg.cond(A)
        if not np.isfinite(cond) or cond > SINGULAR_COND:
            return None
        w = np.linalg.solve(A, b)
    except np.linalg.LinAlgError:
        return None
    return w if np.all(np.isfinite(w)) else None


class LinearRegressor(RegressorMixin, BaseEstimator):
    """Ordinary least squares on standardized features.

    Minimizes ``sum((y - Xs @ w - b)**2) + ridge * ||w||**2``; the intercept is
    not penalized. Columns that are constant on the training rows get weight 0.
    When ``ridge == 0`` and the normal matrix is still singular the fit is
    retried once with ``ridge = 1e-8`` and ``ridge_fallback_`` is set.

    Attributes
    ----------
    coef_ : ndarray of shape (n_features,)
        Weights on standardized features.
    intercept_ : float
        Equals the training-target mean since standardized features are centered.
    ridge_used_ : float
    ridge_fallback_ : bool
    standardizer_ : Standardizer
    """

    def __init__(self, ridge=0.0):
        self.ridge = ridge

    def fit(self, X, y):
        if self.ridge < 0:
            raise ValueError(f"ridge must be >= 0, got {self.ridge}")
        X, y = check_training(X, y)
        self.standardizer_ = Standardizer().fit(X)
        Xs = self.standardizer_.transform(X)
        y_mean = float(y.mean())
        yc = y - y_mean

        # constant training columns carry no information; they get weight 0
        active = ~self.standardizer_.degenerate_
        ridge = float(self.ridge)
        coef = np.zeros(X.shape[1])
        self.ridge_fallback_ = False
        if active.any():
            w = solve_normal_equations(Xs[:, active], yc, ridge)
            if w is None and ridge == 0.0:
                ridge = FALLBACK_RIDGE
                self.ridge_fallback_ = True
                w = solve_normal_equations(Xs[:, active], yc, ridge)
            if w is None:
                raise SingularSystemError(f"normal equations singular at ridge={ridge:g}")
            coef[active] = w

        self.coef_ = coef
        self.intercept_ = y_mean
        self.ridge_used_ = ridge
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_features(X, self.n_features_in_)
        return self.standardizer_.transform(X) @ self.coef_ + self.intercept_

    @property
    def raw_coef_(self):
        """Slopes in original feature units."""
        return self.coef_ / self.standardizer_.scale_

    @property
    def raw_intercept_(self):
        return self.intercept_ - float(self.raw_coef_ @ self.standardizer_.mean_)


def fit_ols(train, target, ridge=0.0):
    return LinearRegressor(ridge=ridge).fit(*target_arrays(train, target))


def predict_linear(model, x):
    return float(model.predict(x)[0])
