"""Composition -> boiling point tables: loading, checking, splitting, scaling.

A dataset row holds nine mass fractions (weight-%) of a mixed-xylene
stream and one or two boiling-point targets in degrees Celsius.
"""

from __future__ import annotations

import csv
import enum
import hashlib
import io
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .exceptions import (
    ArityMismatchError,
    DataError,
    EmptyDatasetError,
    InvalidCountError,
    InvalidTrainCountError,
    MissingHeaderError,
    MissingTargetError,
    NonNumericCellError,
    TooFewRowsError,
    UnknownColumnError,
    WrongArityError,
)

FEATURE_NAMES = (
    "nonaromatics",
    "toluene",
    "ethylbenzene",
    "p_xylene",
    "m_xylene",
    "isopropylbenzene",
    "o_xylene",
    "n_propylbenzene",
    "c9_aromatics",
)
N_FEATURES = len(FEATURE_NAMES)

# Below this a standard deviation counts as zero and the column is only centered.
DEGENERATE_STD = 1e-12

U64_MAX = 2**64 - 1


class TargetKind(enum.Enum):
    INITIAL_BOILING_POINT = "ibp_c"
    FINAL_BOILING_POINT = "fbp_c"

    @property
    def column(self) -> str:
        return self.value

    @property
    def short(self) -> str:
        return self.value[:3]

    @classmethod
    def parse(cls, text: str) -> "TargetKind":
        """Accept ``ibp``/``fbp`` or the column names ``ibp_c``/``fbp_c``."""
        key = text.strip().lower()
        for kind in cls:
            if key in (kind.value, kind.short):
                return kind
        raise ValueError(f"unknown target {text!r}; expected 'ibp' or 'fbp'")


TARGET_COLUMNS = {kind.column: kind for kind in TargetKind}


def check_seed(seed) -> int:
    seed = int(seed)
    if not 0 <= seed <= U64_MAX:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


@dataclass(frozen=True)
class Sample:
    features: tuple[float, ...]
    targets: Mapping[TargetKind, float]


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable table of feature rows and boiling-point targets.

    ``X`` has shape ``(n_samples, n_features)``; ``targets`` maps each present
    :class:`TargetKind` to a length ``n_samples`` array.
    """

    X: np.ndarray
    targets: Mapping[TargetKind, np.ndarray] = field(default_factory=dict)
    feature_names: tuple[str, ...] = FEATURE_NAMES

    def __post_init__(self):
        X = np.array(self.X, dtype=float)
        if X.ndim != 2:
            raise DataError(f"feature block must be 2-D, got shape {X.shape}")
        if X.shape[0] < 1:
            raise EmptyDatasetError()
        if X.shape[1] != len(self.feature_names):
            raise ArityMismatchError(
                f"{len(self.feature_names)} feature names for {X.shape[1]} columns"
            )
        targets = {}
        for kind, values in self.targets.items():
            y = np.array(values, dtype=float)
            if y.shape != (X.shape[0],):
                raise DataError(f"{kind.column}: expected {X.shape[0]} values, got shape {y.shape}")
            if not np.all(np.isfinite(y)):
                raise DataError(f"{kind.column}: non-finite target value")
            y.flags.writeable = False
            targets[TargetKind(kind)] = y
        X.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "targets", dict(sorted(targets.items(), key=lambda kv: kv[0].value)))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    def __len__(self):
        return self.X.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.feature_names == other.feature_names
            and np.array_equal(self.X, other.X)
            and self.targets.keys() == other.targets.keys()
            and all(np.array_equal(self.targets[k], other.targets[k]) for k in self.targets)
        )

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    @property
    def targets_present(self) -> frozenset:
        return frozenset(self.targets)

    @property
    def samples(self) -> list[Sample]:
        return [
            Sample(tuple(self.X[i].tolist()), {k: float(v[i]) for k, v in self.targets.items()})
            for i in range(len(self))
        ]

    def y(self, target: TargetKind) -> np.ndarray:
        try:
            return self.targets[target]
        except KeyError:
            raise MissingTargetError(f"dataset has no {target.column} column") from None

    def subset(self, index) -> "Dataset":
        index = np.asarray(index, dtype=int)
        return Dataset(
            self.X[index],
            {k: v[index] for k, v in self.targets.items()},
            self.feature_names,
        )

    def fingerprint(self) -> str:
        """Content hash over names, features and targets (hex sha256)."""
        h = hashlib.sha256()
        h.update(",".join(self.feature_names).encode())
        h.update(np.ascontiguousarray(self.X, dtype="<f8").tobytes())
        for kind, y in self.targets.items():
            h.update(kind.column.encode())
            h.update(np.ascontiguousarray(y, dtype="<f8").tobytes())
        return h.hexdigest()


@dataclass(frozen=True)
class Split:
    train: Dataset
    test: Dataset
    seed: int
    train_index: tuple[int, ...]
    test_index: tuple[int, ...]


class DiagnosticKind(enum.Enum):
    SUM_DEVIATION = "SumDeviation"
    NEGATIVE_FRACTION = "NegativeFraction"


@dataclass(frozen=True)
class Diagnostic:
    kind: DiagnosticKind
    row: int  # 1-based data row
    message: str


# ---------------------------------------------------------------------------
# CSV


def _open_text(source):
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            return io.StringIO(fh.read().decode("utf-8"), newline="")
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return io.StringIO(data, newline="")


def _parse_cell(text, row, col):
    try:
        value = float(text.strip())
    except ValueError:
        raise NonNumericCellError(row, col, text) from None
    if not math.isfinite(value):
        raise NonNumericCellError(row, col, text)
    return value


def _read_rows(source):
    reader = csv.reader(_open_text(source))
    header = None
    for line in reader:
        if line and any(c.strip() for c in line):
            header = [c.strip() for c in line]
            break
    if header is None:
        raise MissingHeaderError("no header row found")
    try:
        float(header[0])
    except ValueError:
        pass
    else:
        raise MissingHeaderError(f"first line looks like data, not a header: {header[0]!r}")
    rows = [line for line in reader if line and any(c.strip() for c in line)]
    return header, rows


def load_csv(source, require_targets: bool = True) -> Dataset:
    """Read a dataset from a path or byte/text stream.

    The header must list the nine feature columns in canonical order followed
    by ``ibp_c`` and/or ``fbp_c``. With ``require_targets=False`` a
    features-only file is accepted.
    """
    header, rows = _read_rows(source)
    for pos, name in enumerate(header[:N_FEATURES], start=1):
        if name != FEATURE_NAMES[pos - 1]:
            raise UnknownColumnError(name, pos)
    if len(header) < N_FEATURES:
        raise WrongArityError(0, N_FEATURES, len(header))
    target_cols = header[N_FEATURES:]
    kinds = []
    for pos, name in enumerate(target_cols, start=N_FEATURES + 1):
        if name not in TARGET_COLUMNS or TARGET_COLUMNS[name] in kinds:
            raise UnknownColumnError(name, pos)
        kinds.append(TARGET_COLUMNS[name])
    if require_targets and not kinds:
        raise MissingTargetError("no target column (ibp_c/fbp_c) in header")
    if not rows:
        raise EmptyDatasetError()

    width = len(header)
    values = np.empty((len(rows), width))
    for r, line in enumerate(rows, start=1):
        if len(line) != width:
            raise WrongArityError(r, width, len(line))
        for c, cell in enumerate(line, start=1):
            values[r - 1, c - 1] = _parse_cell(cell, r, c)
    targets = {kind: values[:, N_FEATURES + j] for j, kind in enumerate(kinds)}
    return Dataset(values[:, :N_FEATURES], targets)


def read_feature_matrix(source) -> np.ndarray:
    """Numeric block of every non-target column, for scoring archived models.

    Column names other than the target columns are not checked, so the caller
    can report an arity mismatch against the model instead of a header error.
    """
    header, rows = _read_rows(source)
    if not rows:
        raise EmptyDatasetError()
    keep = [i for i, name in enumerate(header) if name not in TARGET_COLUMNS]
    X = np.empty((len(rows), len(keep)))
    for r, line in enumerate(rows, start=1):
        if len(line) != len(header):
            raise WrongArityError(r, len(header), len(line))
        for j, i in enumerate(keep):
            X[r - 1, j] = _parse_cell(line[i], r, i + 1)
    return X


def dumps_csv(ds: Dataset) -> str:
    """Serialize with shortest round-trip float formatting and ``\\n`` endings."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    kinds = list(ds.targets)
    writer.writerow(list(ds.feature_names) + [k.column for k in kinds])
    for i in range(len(ds)):
        row = [repr(float(v)) for v in ds.X[i]]
        row += [repr(float(ds.targets[k][i])) for k in kinds]
        writer.writerow(row)
    return buf.getvalue()


def save_csv(ds: Dataset, dest) -> None:
    text = dumps_csv(ds)
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        dest.write(text)


# ---------------------------------------------------------------------------
# checks and splitting


def validate(ds: Dataset, sum_tolerance: float = 0.5) -> list[Diagnostic]:
    """Warnings for rows whose fractions do not close to 100 % or go negative."""
    out = []
    for i, row in enumerate(ds.X, start=1):
        total = float(np.sum(row))
        if abs(total - 100.0) > sum_tolerance:
            out.append(
                Diagnostic(
                    DiagnosticKind.SUM_DEVIATION,
                    i,
                    f"row {i}: fractions sum to {total:g}, not 100 +/- {sum_tolerance:g}",
                )
            )
        for j in np.flatnonzero(row < 0):
            out.append(
                Diagnostic(
                    DiagnosticKind.NEGATIVE_FRACTION,
                    i,
                    f"row {i}: {ds.feature_names[j]} is negative ({row[j]:g})",
                )
            )
    return out


def split(ds: Dataset, train_count: int, seed: int) -> Split:
    """Seeded shuffle; the first ``train_count`` shuffled rows train, the rest test."""
    seed = check_seed(seed)
    n = len(ds)
    if not 1 <= train_count < n:
        raise InvalidTrainCountError(
            f"train_count must be in [1, {n - 1}] for {n} rows, got {train_count}"
        )
    order = np.random.default_rng(seed).permutation(n)
    train_idx = np.sort(order[:train_count])
    test_idx = np.sort(order[train_count:])
    return Split(
        ds.subset(train_idx),
        ds.subset(test_idx),
        seed,
        tuple(int(i) for i in train_idx),
        tuple(int(i) for i in test_idx),
    )


# ---------------------------------------------------------------------------
# standardization


class Standardizer(TransformerMixin, BaseEstimator):
    """Per-feature z-score using the population standard deviation.

    Columns whose spread is below ``1e-12`` keep a divisor of 1, so they are
    centered but not scaled.
    """

    def fit(self, X, y=None):
        X = check_array(X, dtype=float)
        if X.shape[0] < 2:
            raise TooFewRowsError(f"need at least 2 rows to standardize, got {X.shape[0]}")
        self.mean_ = X.mean(axis=0)
        std = X.std(axis=0)
        self.degenerate_ = std < DEGENERATE_STD
        self.scale_ = np.where(self.degenerate_, 1.0, std)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "mean_")
        X = np.asarray(X, dtype=float)
        if X.shape[-1] != self.n_features_in_:
            raise ArityMismatchError(
                f"expected {self.n_features_in_} features, got {X.shape[-1]}"
            )
        return (X - self.mean_) / self.scale_

    def inverse_transform(self, X):
        check_is_fitted(self, "mean_")
        return np.asarray(X, dtype=float) * self.scale_ + self.mean_

    @property
    def means(self):
        return self.mean_

    @property
    def stddevs(self):
        return self.scale_

    @classmethod
    def from_params(cls, means, stddevs) -> "Standardizer":
        s = cls()
        s.mean_ = np.array(means, dtype=float)
        s.scale_ = np.array(stddevs, dtype=float)
        if s.mean_.shape != s.scale_.shape or s.mean_.ndim != 1:
            raise ArityMismatchError("means and stddevs must be equal-length vectors")
        if np.any(s.scale_ <= 0):
            raise ValueError("stddevs must be positive")
        s.n_features_in_ = s.mean_.shape[0]
        s.degenerate_ = np.zeros(s.n_features_in_, dtype=bool)
        return s

    @classmethod
    def identity(cls, n_features: int = N_FEATURES) -> "Standardizer":
        return cls.from_params(np.zeros(n_features), np.ones(n_features))


def fit_standardizer(train: Dataset | np.ndarray) -> Standardizer:
    X = train.X if isinstance(train, Dataset) else train
    return Standardizer().fit(X)


def standardize(s: Standardizer, x) -> np.ndarray:
    return s.transform(x)


# ---------------------------------------------------------------------------
# synthetic surrogate data

# Typical mixed-xylene composition (weight-%), in FEATURE_NAMES order. Used as
# Dirichlet concentrations, so minor components vary over roughly 0-6 %.
BASE_COMPOSITION = np.array([1.5, 1.0, 16.0, 19.0, 42.0, 0.5, 18.0, 0.3, 1.7])

# Approximate normal boiling points of the components, degrees C.
COMPONENT_BOILING_POINTS = np.array(
    [118.0, 110.6, 136.2, 138.4, 139.1, 152.4, 144.4, 159.2, 168.0]
)

NOISE_SD = 0.05
NOISE_CLIP = 0.15


def mixing_base(fractions) -> np.ndarray:
    """Mass-weighted mean of component boiling points (affine in the fractions)."""
    return np.asarray(fractions) @ COMPONENT_BOILING_POINTS / 100.0


def mixing_targets(fractions, kind: str = "nonlinear") -> tuple[np.ndarray, np.ndarray]:
    """Noise-free (ibp, fbp) for each row of ``fractions``.

    ``nonlinear``::

        light = nonaromatics + toluene
        heavy = isopropylbenzene + n_propylbenzene + c9_aromatics
        ibp = base - 6 * sigmoid((light - 2.5) / 0.6)
        fbp = base + 9 + 8 * tanh((heavy - 3) / 1.2)

    ``affine``::

        ibp = base - 2
        fbp = base + 4

    ``fbp - ibp >= 1`` in both cases.
    """
    F = np.asarray(fractions, dtype=float)
    base = mixing_base(F)
    if kind == "affine":
        return base - 2.0, base + 4.0
    if kind != "nonlinear":
        raise ValueError(f"unknown mixing kind {kind!r}")
    light = F[:, 0] + F[:, 1]
    heavy = F[:, 5] + F[:, 7] + F[:, 8]
    ibp = base - 6.0 / (1.0 + np.exp(-(light - 2.5) / 0.6))
    fbp = base + 9.0 + 8.0 * np.tanh((heavy - 3.0) / 1.2)
    return ibp, fbp


def generate_synthetic(n: int, seed: int, kind: str = "nonlinear") -> Dataset:
    """Seeded surrogate dataset with both targets.

    Fractions are Dirichlet draws around :data:`BASE_COMPOSITION`, rescaled to
    sum to 100. Targets come from :func:`mixing_targets`; the nonlinear kind
    adds Gaussian noise (sd 0.05 degC, clipped to +/-0.15) so ``ibp < fbp``
    always holds. The affine kind is noiseless.
    """
    if int(n) != n or n < 2:
        raise InvalidCountError(f"n must be an integer >= 2, got {n}")
    rng = np.random.default_rng(check_seed(seed))
    F = rng.dirichlet(BASE_COMPOSITION, size=int(n)) * 100.0
    F = F / F.sum(axis=1, keepdims=True) * 100.0
    ibp, fbp = mixing_targets(F, kind)
    if kind == "nonlinear":
        noise = np.clip(rng.normal(0.0, NOISE_SD, size=(2, int(n))), -NOISE_CLIP, NOISE_CLIP)
        ibp = ibp + noise[0]
        fbp = fbp + noise[1]
    return Dataset(
        F,
        {TargetKind.INITIAL_BOILING_POINT: ibp, TargetKind.FINAL_BOILING_POINT: fbp},
    )


def from_arrays(X, y: Iterable[float] | None = None, target=TargetKind.INITIAL_BOILING_POINT) -> Dataset:
    """Wrap plain arrays; feature names default to the canonical list when 9 wide."""
    X = np.asarray(X, dtype=float)
    names = FEATURE_NAMES if X.shape[1] == N_FEATURES else tuple(f"x{i}" for i in range(X.shape[1]))
    return Dataset(X, {} if y is None else {target: np.asarray(y, dtype=float)}, names)
