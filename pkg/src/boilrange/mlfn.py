"""Single-hidden-layer feedforward regressor trained by backpropagation.

Architecture ``d -> h -> 1``: sigmoid hidden units, linear output. Inputs are
standardized per feature and the target is standardized with its own mean and
population standard deviation; the loss is the mean squared error in those
standardized target units. Training is deterministic full-batch gradient
descent with classical momentum.
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import expit
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_features, check_training, target_arrays
from .dataset import DEGENERATE_STD, N_FEATURES, Standardizer, check_seed
from .exceptions import EmptyBatchError, InvalidHiddenCountError

DIVERGENCE_LOSS = 1e6
MIN_IMPROVEMENT = 1e-10


class StopReason(enum.Enum):
    MAX_EPOCHS = "MaxEpochs"
    EARLY_STOP = "EarlyStop"
    DIVERGED = "Diverged"


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.05
    momentum: float = 0.9
    max_epochs: int = 20000
    patience: int = 500
    seed: int = 0
    init_scale: float = 0.5

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be > 0")
        if not 0 <= self.momentum < 1:
            raise ValueError("momentum must be in [0, 1)")
        if self.max_epochs < 1 or self.patience < 1:
            raise ValueError("max_epochs and patience must be >= 1")
        if not self.init_scale > 0:
            raise ValueError("init_scale must be > 0")
        check_seed(self.seed)

    def replace(self, **changes) -> "TrainConfig":
        return TrainConfig(**{**asdict(self), **changes})


@dataclass(frozen=True)
class TrainHistory:
    losses: tuple[float, ...]
    stop_reason: StopReason

    @property
    def diverged(self) -> bool:
        return self.stop_reason is StopReason.DIVERGED

    @property
    def epochs(self) -> int:
        return len(self.losses)


class Gradients(NamedTuple):
    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: float


def n_parameters(h, d=N_FEATURES):
    return h * d + 2 * h + 1


class _Layout:
    """Views into one flat parameter vector: W1 (h*d), b1 (h), W2 (h), b2 (1)."""

    def __init__(self, h, d):
        self.h, self.d = h, d
        self.size = n_parameters(h, d)

    def unpack(self, theta):
        h, d = self.h, self.d
        W1 = theta[: h * d].reshape(h, d)
        b1 = theta[h * d : h * d + h]
        W2 = theta[h * d + h : h * d + 2 * h]
        return W1, b1, W2, theta[-1:]


def loss_and_grad(theta, layout, Xs, ys, grad=None):
    """MSE and its gradient w.r.t. the flat parameter vector."""
    W1, b1, W2, b2 = layout.unpack(theta)
    A = expit(Xs @ W1.T + b1)
    r = A @ W2 + b2[0] - ys
    n = ys.shape[0]
    loss = float(r @ r) / n
    if grad is None:
        grad = np.empty_like(theta)
    gW1, gb1, gW2, gb2 = layout.unpack(grad)
    g = r * (2.0 / n)
    gW2[:] = g @ A
    gb2[0] = g.sum()
    dZ = np.outer(g, W2)
    dZ *= A * (1.0 - A)
    gW1[:] = dZ.T @ Xs
    gb1[:] = dZ.sum(axis=0)
    return loss, grad


def init_parameters(h, d, seed, init_scale):
    rng = np.random.default_rng(check_seed(seed))
    return rng.uniform(-init_scale, init_scale, size=n_parameters(h, d))


def gradient_descent(theta, layout, Xs, ys, cfg: TrainConfig):
    """Momentum descent from ``theta``. Returns the final parameters and history."""
    theta = theta.copy()
    velocity = np.zeros_like(theta)
    grad = np.empty_like(theta)
    previous = theta.copy()
    losses = []
    best = np.inf
    stall = 0
    lr, mu = cfg.learning_rate, cfg.momentum
    reason = StopReason.MAX_EPOCHS
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(cfg.max_epochs):
            loss, grad = loss_and_grad(theta, layout, Xs, ys, grad)
            if not np.isfinite(loss) or loss > DIVERGENCE_LOSS or not np.all(np.isfinite(grad)):
                if losses:
                    theta = previous
                reason = StopReason.DIVERGED
                break
            losses.append(loss)
            if loss < best - MIN_IMPROVEMENT:
                best = loss
                stall = 0
            else:
                stall += 1
                if stall >= cfg.patience:
                    reason = StopReason.EARLY_STOP
                    break
            previous[:] = theta
            velocity *= mu
            velocity -= lr * grad
            theta += velocity
    if not np.all(np.isfinite(theta)):
        theta = previous
        reason = StopReason.DIVERGED
    return theta, TrainHistory(tuple(losses), reason)


class MLFNRegressor(RegressorMixin, BaseEstimator):
    """``d -> hidden -> 1`` sigmoid network trained by full-batch momentum descent.

    Parameters
    ----------
    hidden : int
        Number of hidden units.
    learning_rate, momentum, max_epochs, patience, init_scale, seed
        See :class:`TrainConfig`.

    Attributes
    ----------
    theta_ : ndarray
        Flat parameters ``[W1.ravel(), b1, W2, b2]``.
    standardizer_ : Standardizer
    target_mean_, target_scale_ : float
    history_ : TrainHistory
    """

    def __init__(
        self,
        hidden=7,
        learning_rate=0.05,
        momentum=0.9,
        max_epochs=20000,
        patience=500,
        init_scale=0.5,
        seed=0,
    ):
        self.hidden = hidden
        self.learning_rate = learning_rate
        self.momentum = momentum
        self.max_epochs = max_epochs
        self.patience = patience
        self.init_scale = init_scale
        self.seed = seed

    @property
    def config(self) -> TrainConfig:
        return TrainConfig(
            learning_rate=self.learning_rate,
            momentum=self.momentum,
            max_epochs=self.max_epochs,
            patience=self.patience,
            seed=self.seed,
            init_scale=self.init_scale,
        )

    @classmethod
    def from_config(cls, hidden, cfg: TrainConfig) -> "MLFNRegressor":
        return cls(hidden=hidden, **asdict(cfg))

    def fit(self, X, y):
        _check_hidden(self.hidden)
        cfg = self.config
        X, y = check_training(X, y)
        self.standardizer_ = Standardizer().fit(X)
        self.target_mean_ = float(y.mean())
        std = float(y.std())
        self.target_scale_ = 1.0 if std < DEGENERATE_STD else std
        self.n_features_in_ = X.shape[1]
        self._layout = _Layout(self.hidden, self.n_features_in_)

        theta0 = init_parameters(self.hidden, self.n_features_in_, cfg.seed, cfg.init_scale)
        self.theta_, self.history_ = gradient_descent(
            theta0, self._layout, self.standardizer_.transform(X), self._scale_y(y), cfg
        )
        return self

    def _scale_y(self, y):
        return (np.asarray(y, dtype=float) - self.target_mean_) / self.target_scale_

    def decision_function_std(self, X):
        """Network output in standardized target units."""
        check_is_fitted(self, "theta_")
        Xs = self.standardizer_.transform(check_features(X, self.n_features_in_))
        W1, b1, W2, b2 = self.parameters
        return expit(Xs @ W1.T + b1) @ W2 + b2

    def predict(self, X):
        return self.decision_function_std(X) * self.target_scale_ + self.target_mean_

    @property
    def parameters(self):
        """``(W1, b1, W2, b2)`` as views into ``theta_``."""
        W1, b1, W2, b2 = _Layout(self.hidden, self.n_features_in_).unpack(self.theta_)
        return W1, b1, W2, float(b2[0])

    @property
    def n_parameters_(self):
        return self.theta_.size

    @classmethod
    def from_params(cls, W1, b1, W2, b2, standardizer, target_mean=0.0, target_scale=1.0, **hyper):
        W1 = np.atleast_2d(np.asarray(W1, dtype=float))
        h, d = W1.shape
        m = cls(hidden=h, **hyper)
        m.standardizer_ = standardizer
        m.target_mean_ = float(target_mean)
        m.target_scale_ = float(target_scale)
        m.n_features_in_ = d
        m._layout = _Layout(h, d)
        m.theta_ = np.concatenate(
            [W1.ravel(), np.asarray(b1, float).ravel(), np.asarray(W2, float).ravel(), [float(b2)]]
        )
        if m.theta_.size != n_parameters(h, d):
            raise ValueError("parameter shapes are inconsistent")
        return m

    # batch helpers: (x, y) pairs in raw units

    def _batch(self, batch):
        if isinstance(batch, tuple) and len(batch) == 2 and np.ndim(batch[0]) == 2:
            X, y = batch
        else:
            batch = list(batch)
            if not batch:
                raise EmptyBatchError("batch is empty")
            X = [x for x, _ in batch]
            y = [t for _, t in batch]
        X = check_features(X, self.n_features_in_)
        y = np.asarray(y, dtype=float).ravel()
        if X.shape[0] == 0:
            raise EmptyBatchError("batch is empty")
        return self.standardizer_.transform(X), self._scale_y(y)


def _check_hidden(h):
    if int(h) != h or h < 1:
        raise InvalidHiddenCountError(f"hidden unit count must be an integer >= 1, got {h}")


def init_weights(h, seed, init_scale=0.5, n_features=N_FEATURES) -> MLFNRegressor:
    """Untrained network with identity input and target scaling."""
    _check_hidden(h)
    theta = init_parameters(h, n_features, seed, init_scale)
    W1, b1, W2, b2 = _Layout(h, n_features).unpack(theta)
    return MLFNRegressor.from_params(
        W1, b1, W2, b2[0], Standardizer.identity(n_features), seed=seed, init_scale=init_scale
    )


def forward(model: MLFNRegressor, x) -> float:
    return float(model.predict(x)[0])


def mse_loss(model: MLFNRegressor, batch) -> float:
    """Mean squared error in standardized target units over ``(x, y)`` pairs."""
    Xs, ys = model._batch(batch)
    return loss_and_grad(model.theta_, _Layout(model.hidden, model.n_features_in_), Xs, ys)[0]


def backprop_gradients(model: MLFNRegressor, batch) -> Gradients:
    Xs, ys = model._batch(batch)
    layout = _Layout(model.hidden, model.n_features_in_)
    _, grad = loss_and_grad(model.theta_, layout, Xs, ys)
    gW1, gb1, gW2, gb2 = layout.unpack(grad)
    return Gradients(gW1.copy(), gb1.copy(), gW2.copy(), float(gb2[0]))


def train_mlfn(train, target, h, cfg: TrainConfig | None = None):
    """Fit on a Dataset; returns ``(model, history)``."""
    _check_hidden(h)
    model = MLFNRegressor.from_config(h, cfg or TrainConfig()).fit(*target_arrays(train, target))
    return model, model.history_
