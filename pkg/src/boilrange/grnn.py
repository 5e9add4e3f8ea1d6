"""General regression neural network (normalized Gaussian-kernel regression).

Prediction at ``x`` is the kernel-weighted mean of the stored targets::

    y(x) = sum_i y_i exp(-D_i^2 / (2 sigma^2)) / sum_i exp(-D_i^2 / (2 sigma^2))

with ``D_i`` the Euclidean distance between standardized ``x`` and pattern ``i``.
"""

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_features, check_training, target_arrays
from .dataset import Standardizer
from .exceptions import EmptyCandidatesError, EmptyTrainSetError, NonPositiveSigmaError, TooFewRowsError

DEFAULT_SIGMAS = (0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0)


def _check_sigma(sigma):
    sigma = float(sigma)
    if not (np.isfinite(sigma) and sigma > 0):
        raise NonPositiveSigmaError(f"sigma must be positive and finite, got {sigma}")
    return sigma


def squared_distances(A, B):
    # explicit differences; the |a|^2 - 2ab + |b|^2 expansion loses digits at small sigma
    diff = A[:, None, :] - B[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def kernel_average(d2, targets, sigma):
    """Row-wise normalized kernel average, stabilized by subtracting the row max.

    Entries of ``d2`` equal to ``inf`` are excluded (used for leave-one-out).
    """
    logits = -d2 / (2.0 * sigma * sigma)
    logits -= logits.max(axis=1, keepdims=True)
    w = np.exp(logits)
    out = (w @ targets) / w.sum(axis=1)
    # convex combination; clip the last-ulp rounding excursions
    return np.clip(out, targets.min(), targets.max())


def loo_rms(Xs, y, sigma):
    """Leave-one-out RMS: each pattern predicted from the other ``n - 1``."""
    if len(y) < 2:
        raise TooFewRowsError("leave-one-out needs at least 2 rows")
    d2 = squared_distances(Xs, Xs)
    np.fill_diagonal(d2, np.inf)
    pred = kernel_average(d2, y, _check_sigma(sigma))
    return float(np.sqrt(np.mean((pred - y) ** 2)))


def select_sigma(Xs, y, candidates):
    """Candidate with the smallest leave-one-out RMS; ties go to the smaller sigma."""
    candidates = sorted(_check_sigma(s) for s in candidates)
    if not candidates:
        raise EmptyCandidatesError("no bandwidth candidates given")
    best, best_rms = None, np.inf
    for s in candidates:
        rms = loo_rms(Xs, y, s)
        if rms < best_rms:
            best, best_rms = s, rms
    return best


class GRNNRegressor(RegressorMixin, BaseEstimator):
    """Specht-style GRNN over standardized training patterns.

    Parameters
    ----------
    sigma : float or None
        Kernel bandwidth in standardized-feature units. ``None`` selects it
        from ``sigma_candidates`` by leave-one-out RMS on the training set.
    sigma_candidates : sequence of float
    """

    def __init__(self, sigma=None, sigma_candidates=DEFAULT_SIGMAS):
        self.sigma = sigma
        self.sigma_candidates = sigma_candidates

    def fit(self, X, y):
        if self.sigma is not None:
            _check_sigma(self.sigma)
        X, y = check_training(X, y, min_rows=1, error=EmptyTrainSetError)
        if X.shape[0] == 1:
            self.standardizer_ = Standardizer.from_params(X[0], np.ones(X.shape[1]))
        else:
            self.standardizer_ = Standardizer().fit(X)
        self.patterns_ = self.standardizer_.transform(X)
        self.targets_ = y.copy()
        if self.sigma is None:
            self.sigma_ = select_sigma(self.patterns_, self.targets_, self.sigma_candidates)
            self.sigma_selected_ = True
        else:
            self.sigma_ = float(self.sigma)
            self.sigma_selected_ = False
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "patterns_")
        Xs = self.standardizer_.transform(check_features(X, self.n_features_in_))
        return kernel_average(squared_distances(Xs, self.patterns_), self.targets_, self.sigma_)

    @classmethod
    def from_params(cls, standardizer, patterns, targets, sigma):
        m = cls(sigma=sigma)
        m.standardizer_ = standardizer
        m.patterns_ = np.asarray(patterns, dtype=float)
        m.targets_ = np.asarray(targets, dtype=float)
        m.sigma_ = _check_sigma(sigma)
        m.sigma_selected_ = False
        m.n_features_in_ = m.patterns_.shape[1]
        return m


def fit_grnn(train, target, sigma):
    _check_sigma(sigma)
    return GRNNRegressor(sigma=sigma).fit(*target_arrays(train, target))


def predict_grnn(model, x):
    return float(model.predict(x)[0])


def select_bandwidth(train, target, candidates=DEFAULT_SIGMAS):
    candidates = list(candidates)
    if not candidates:
        raise EmptyCandidatesError("no bandwidth candidates given")
    X, y = target_arrays(train, target)
    if len(y) < 2:
        raise TooFewRowsError("bandwidth selection needs at least 2 rows")
    return select_sigma(Standardizer().fit(X).transform(X), y, candidates)
