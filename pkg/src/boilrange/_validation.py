import numpy as np
from sklearn.utils.validation import check_array, check_X_y

from .exceptions import ArityMismatchError, TooFewRowsError


def check_training(X, y, min_rows=2, error=TooFewRowsError):
    X, y = check_X_y(X, y, dtype=float, y_numeric=True, ensure_min_samples=1)
    if X.shape[0] < min_rows:
        raise error(f"need at least {min_rows} training rows, got {X.shape[0]}")
    return X, y


def check_features(X, n_features):
    """Coerce a single vector or a 2-D block; raise on a width mismatch."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != n_features:
        raise ArityMismatchError(
            f"expected {n_features} features, got {X.shape[-1] if X.ndim else 0}"
        )
    return check_array(X, dtype=float)


def target_arrays(train, target):
    """(X, y) from a Dataset; lets the module-level helpers mirror the estimators."""
    return train.X, train.y(target)
