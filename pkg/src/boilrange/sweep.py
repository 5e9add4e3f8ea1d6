"""Train/test evaluation and the model-family sweep.

Every candidate (least squares, GRNN, and one MLFN per hidden-unit count) is
fitted on the same seeded training split and scored by RMS error on the
held-out rows; the lowest RMS wins, ties going to the simpler model.
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed

from .dataset import Dataset, Split, TargetKind, check_seed, split
from .exceptions import EmptyInputError, EmptyRowsError, EmptyTestSetError, LengthMismatchError
from .grnn import DEFAULT_SIGMAS, GRNNRegressor
from .linear import LinearRegressor
from .mlfn import MLFNRegressor, TrainConfig

DEFAULT_MLFN_RANGE = range(2, 31)
DEFAULT_TRAIN_COUNT = 14

_KIND_ORDER = {"linear": 0, "grnn": 1, "mlfn": 2}


@dataclass(frozen=True, order=False)
class ModelId:
    kind: str
    hidden: int | None = None

    def __post_init__(self):
        if self.kind not in _KIND_ORDER:
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.kind == "mlfn":
            if self.hidden is None or int(self.hidden) != self.hidden or self.hidden < 1:
                raise ValueError(f"MLFN needs a hidden count >= 1, got {self.hidden}")
        elif self.hidden is not None:
            raise ValueError(f"{self.kind} takes no hidden count")

    @classmethod
    def linear(cls):
        return cls("linear")

    @classmethod
    def grnn(cls):
        return cls("grnn")

    @classmethod
    def mlfn(cls, h):
        return cls("mlfn", int(h))

    @classmethod
    def parse(cls, text):
        kind, _, h = text.strip().lower().partition(":")
        return cls(kind, int(h)) if kind == "mlfn" else cls(kind)

    @property
    def sort_key(self):
        return (_KIND_ORDER[self.kind], self.hidden or 0)

    @property
    def label(self):
        if self.kind == "linear":
            return "Linear prediction"
        if self.kind == "grnn":
            return "GRNN"
        return f"MLFN {self.hidden} Nodes"

    def __str__(self):
        return self.kind if self.hidden is None else f"{self.kind}:{self.hidden}"


@dataclass(frozen=True)
class SweepRow:
    model: ModelId
    trained: int
    tested: int
    rms: float
    diverged: bool = False
    notes: str = ""


@dataclass(frozen=True)
class EvalReport:
    pairs: tuple[tuple[float, float], ...]  # (actual, predicted)
    rms: float

    @property
    def actual(self):
        return np.array([a for a, _ in self.pairs])

    @property
    def predicted(self):
        return np.array([p for _, p in self.pairs])


@dataclass(frozen=True)
class SweepResult:
    target: TargetKind
    rows: tuple[SweepRow, ...]
    best: ModelId
    master_seed: int
    split: Split = field(compare=False, repr=False)
    models: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def best_row(self) -> SweepRow:
        return next(r for r in self.rows if r.model == self.best)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["model", "trained", "tested", "rms", "diverged", "notes"])
        for r in self.rows:
            w.writerow([str(r.model), r.trained, r.tested, repr(float(r.rms)), str(r.diverged).lower(), r.notes])
        return buf.getvalue()

    def to_table(self) -> str:
        head = ("ANN model", "Trained samples", "Tested samples", "RMS error")
        body = [
            (r.model.label, str(r.trained), str(r.tested), _fmt_rms(r.rms) + ("*" if r.diverged else ""))
            for r in self.rows
        ]
        widths = [max(len(row[i]) for row in [head, *body]) for i in range(4)]

        def line(cells):
            first = cells[0].ljust(widths[0])
            rest = [c.rjust(wd) for c, wd in zip(cells[1:], widths[1:])]
            return "  ".join([first, *rest]).rstrip()

        title = f"Results for {self.target.column} (split seed {self.master_seed})"
        out = [title, line(head), "  ".join("-" * w for w in widths)]
        out += [line(b) for b in body]
        if any(r.diverged for r in self.rows):
            out.append("* training diverged; RMS of the last finite model")
        best = self.best_row
        out.append(f"Best: {best.model.label} (RMS {_fmt_rms(best.rms)})")
        return "\n".join(out) + "\n"


def _fmt_rms(v):
    if v != 0 and abs(v) < 0.005:
        return f"{v:.2e}"
    return f"{v:.2f}"


def rms_error(predicted, actual) -> float:
    """Root mean square of ``predicted - actual``."""
    p = np.asarray(predicted, dtype=float).ravel()
    a = np.asarray(actual, dtype=float).ravel()
    if p.size != a.size:
        raise LengthMismatchError(f"{p.size} predictions for {a.size} actual values")
    if p.size == 0:
        raise EmptyInputError("rms_error of empty vectors")
    d = p - a
    return math.sqrt(float(d @ d) / d.size)


def evaluate(model, test: Dataset, target: TargetKind) -> EvalReport:
    if test is None or len(test) == 0:
        raise EmptyTestSetError("nothing to evaluate")
    actual = test.y(target)
    predicted = np.asarray(model.predict(test.X), dtype=float)
    rms = rms_error(predicted, actual)
    return EvalReport(tuple(zip(actual.tolist(), predicted.tolist())), rms)


def candidate_seed(master_seed: int, model: ModelId) -> int:
    """Stable per-candidate seed: first 8 bytes (little endian) of
    ``blake2b(f"{master_seed}/{model}")``."""
    digest = hashlib.blake2b(f"{check_seed(master_seed)}/{model}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def select_best(rows) -> ModelId:
    rows = list(rows)
    if not rows:
        raise EmptyRowsError("no sweep rows")
    best = rows[0]
    for r in rows[1:]:
        if r.rms < best.rms:
            best = r
    return best.model


def _fit_candidate(model_id, sp, target, master_seed, mlfn_config, sigma_candidates):
    X, y = sp.train.X, sp.train.y(target)
    diverged = False
    if model_id.kind == "linear":
        model = LinearRegressor().fit(X, y)
        notes = f"ridge={model.ridge_used_:g}" + (" (singular fallback)" if model.ridge_fallback_ else "")
    elif model_id.kind == "grnn":
        model = GRNNRegressor(sigma_candidates=tuple(sigma_candidates)).fit(X, y)
        notes = f"sigma={model.sigma_:g} (LOO from {'/'.join(f'{s:g}' for s in sorted(sigma_candidates))})"
    else:
        seed = candidate_seed(master_seed, model_id)
        cfg = mlfn_config.replace(seed=seed)
        model = MLFNRegressor.from_config(model_id.hidden, cfg).fit(X, y)
        hist = model.history_
        diverged = hist.diverged
        notes = f"seed={seed} epochs={hist.epochs} stop={hist.stop_reason.value}"
    with np.errstate(over="ignore", invalid="ignore"):
        rms = evaluate(model, sp.test, target).rms
    if not math.isfinite(rms):
        rms = float(np.finfo(float).max)
        diverged = True
    row = SweepRow(model_id, len(sp.train), len(sp.test), rms, diverged, notes)
    return row, model


def run_sweep(
    ds: Dataset,
    target: TargetKind,
    train_count: int = DEFAULT_TRAIN_COUNT,
    master_seed: int = 0,
    mlfn_range=DEFAULT_MLFN_RANGE,
    *,
    mlfn_config: TrainConfig | None = None,
    sigma_candidates=DEFAULT_SIGMAS,
    n_jobs: int = 1,
) -> SweepResult:
    """Fit every candidate on one shared split and rank them by test RMS.

    The split uses ``master_seed`` directly; each MLFN gets its own seed from
    :func:`candidate_seed`, so extending ``mlfn_range`` leaves existing rows
    untouched. ``mlfn_config`` supplies the training hyperparameters (its seed
    field is ignored). Results do not depend on ``n_jobs``.
    """
    master_seed = check_seed(master_seed)
    hidden = sorted(set(int(h) for h in mlfn_range))
    if not hidden:
        raise ValueError("mlfn_range is empty")
    ds.y(target)
    sp = split(ds, train_count, master_seed)
    cfg = mlfn_config or TrainConfig()
    ids = [ModelId.linear(), ModelId.grnn()] + [ModelId.mlfn(h) for h in hidden]

    if n_jobs == 1:
        fitted = [_fit_candidate(m, sp, target, master_seed, cfg, sigma_candidates) for m in ids]
    else:
        fitted = Parallel(n_jobs=n_jobs)(
            delayed(_fit_candidate)(m, sp, target, master_seed, cfg, sigma_candidates) for m in ids
        )
    fitted.sort(key=lambda rm: rm[0].model.sort_key)
    rows = tuple(r for r, _ in fitted)
    return SweepResult(
        target=target,
        rows=rows,
        best=select_best(rows),
        master_seed=master_seed,
        split=sp,
        models={r.model: m for r, m in fitted},
    )
