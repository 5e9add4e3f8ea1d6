"""Small-sample regression of mixed-xylene boiling range from composition.

Three regressor families with a scikit-learn style API (least squares, GRNN,
single-hidden-layer MLFN) plus the 14/8 split sweep that ranks them by test
RMS error.
"""

from .dataset import (
    FEATURE_NAMES,
    Dataset,
    Diagnostic,
    Split,
    Standardizer,
    TargetKind,
    fit_standardizer,
    generate_synthetic,
    load_csv,
    save_csv,
    split,
    standardize,
    validate,
)
from .grnn import GRNNRegressor, fit_grnn, predict_grnn, select_bandwidth
from .linear import LinearRegressor, fit_ols, predict_linear
from .mlfn import (
    MLFNRegressor,
    StopReason,
    TrainConfig,
    TrainHistory,
    backprop_gradients,
    forward,
    init_weights,
    mse_loss,
    train_mlfn,
)
from .sweep import ModelId, SweepResult, SweepRow, evaluate, rms_error, run_sweep, select_best

__version__ = "0.1.0"

__all__ = [
    "FEATURE_NAMES",
    "Dataset",
    "Diagnostic",
    "GRNNRegressor",
    "LinearRegressor",
    "MLFNRegressor",
    "ModelId",
    "Split",
    "Standardizer",
    "StopReason",
    "SweepResult",
    "SweepRow",
    "TargetKind",
    "TrainConfig",
    "TrainHistory",
    "backprop_gradients",
    "evaluate",
    "fit_grnn",
    "fit_ols",
    "fit_standardizer",
    "forward",
    "generate_synthetic",
    "init_weights",
    "load_csv",
    "mse_loss",
    "predict_grnn",
    "predict_linear",
    "rms_error",
    "run_sweep",
    "save_csv",
    "select_bandwidth",
    "select_best",
    "split",
    "standardize",
    "train_mlfn",
    "validate",
]
