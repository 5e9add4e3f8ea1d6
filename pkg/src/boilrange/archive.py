"""Versioned JSON model archives.

Layout (``format_version`` 1)::

    {
      "format": "boilrange-model",
      "format_version": 1,
      "kind": "linear" | "grnn" | "mlfn",
      "standardizer": {"means": [...], "stddevs": [...]},
      "params": {...},            # kind specific, see _PARAMS_*
      "metadata": {"target": "ibp_c", "seed": 0,
                   "dataset_fingerprint": "<sha256>", ...}
    }

Floats are written with shortest round-trip formatting, so a reloaded model
predicts bit-for-bit like the original.
"""

import json
import os
from dataclasses import asdict

import numpy as np

from .dataset import Standardizer
from .exceptions import ArchiveError
from .grnn import GRNNRegressor
from .linear import LinearRegressor
from .mlfn import MLFNRegressor, StopReason, TrainHistory

FORMAT = "boilrange-model"
FORMAT_VERSION = 1


def model_kind(model):
    if isinstance(model, LinearRegressor):
        return "linear"
    if isinstance(model, GRNNRegressor):
        return "grnn"
    if isinstance(model, MLFNRegressor):
        return "mlfn"
    raise TypeError(f"cannot archive {type(model).__name__}")


def _floats(a):
    return [float(v) for v in np.asarray(a, dtype=float).ravel()]


def to_dict(model, metadata=None) -> dict:
    kind = model_kind(model)
    s = model.standardizer_
    if kind == "linear":
        params = {
            "weights": _floats(model.coef_),
            "intercept": float(model.intercept_),
            "ridge": float(model.ridge_used_),
            "ridge_fallback": bool(model.ridge_fallback_),
        }
    elif kind == "grnn":
        params = {
            "patterns": [_floats(p) for p in model.patterns_],
            "targets": _floats(model.targets_),
            "sigma": float(model.sigma_),
        }
    else:
        W1, b1, W2, b2 = model.parameters
        params = {
            "hidden": int(model.hidden),
            "W1": [_floats(r) for r in W1],
            "b1": _floats(b1),
            "W2": _floats(W2),
            "b2": float(b2),
            "target_mean": float(model.target_mean_),
            "target_scale": float(model.target_scale_),
            "config": asdict(model.config),
        }
        hist = getattr(model, "history_", None)
        if hist is not None:
            params["training"] = {"epochs": hist.epochs, "stop_reason": hist.stop_reason.value}
    return {
        "format": FORMAT,
        "format_version": FORMAT_VERSION,
        "kind": kind,
        "standardizer": {"means": _floats(s.mean_), "stddevs": _floats(s.scale_)},
        "params": params,
        "metadata": dict(metadata or {}),
    }


def from_dict(doc: dict):
    """Rebuild a fitted estimator; returns ``(model, metadata)``."""
    try:
        if doc.get("format") != FORMAT:
            raise ArchiveError(f"not a model archive (format={doc.get('format')!r})")
        if doc.get("format_version") != FORMAT_VERSION:
            raise ArchiveError(f"unsupported archive version {doc.get('format_version')!r}")
        s = Standardizer.from_params(doc["standardizer"]["means"], doc["standardizer"]["stddevs"])
        p = doc["params"]
        kind = doc["kind"]
        if kind == "linear":
            m = LinearRegressor(ridge=p["ridge"])
            m.standardizer_ = s
            m.coef_ = np.array(p["weights"], dtype=float)
            m.intercept_ = float(p["intercept"])
            m.ridge_used_ = float(p["ridge"])
            m.ridge_fallback_ = bool(p["ridge_fallback"])
            m.n_features_in_ = m.coef_.size
        elif kind == "grnn":
            m = GRNNRegressor.from_params(s, p["patterns"], p["targets"], p["sigma"])
        elif kind == "mlfn":
            m = MLFNRegressor.from_params(
                p["W1"], p["b1"], p["W2"], p["b2"], s, p["target_mean"], p["target_scale"], **p["config"]
            )
            if "training" in p:
                # per-epoch losses are not archived
                m.history_ = TrainHistory((), StopReason(p["training"]["stop_reason"]))
        else:
            raise ArchiveError(f"unknown model kind {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ArchiveError):
            raise
        raise ArchiveError(f"malformed archive: {exc}") from exc
    if m.n_features_in_ != s.n_features_in_:
        raise ArchiveError("standardizer and model disagree on feature count")
    return m, doc.get("metadata", {})


def dumps(model, metadata=None) -> str:
    return json.dumps(to_dict(model, metadata), indent=2, sort_keys=True) + "\n"


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArchiveError(f"archive is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ArchiveError("archive root must be an object")
    return from_dict(doc)


def save(model, path, metadata=None) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(dumps(model, metadata))


def load(path: str | os.PathLike):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
