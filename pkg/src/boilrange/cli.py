"""Command line entry point: ``boilrange {gen-data,sweep,train,predict,report}``.

Exit codes: 0 ok, 2 usage, 3 I/O, 4 data validation, 5 model/data mismatch.
"""

import argparse
import csv
import io
import os
import sys

from . import archive
from .dataset import (
    TargetKind,
    check_seed,
    dumps_csv,
    generate_synthetic,
    load_csv,
    read_feature_matrix,
    validate,
)
from .exceptions import ArchiveError, ArityMismatchError, DataError, InvalidTrainCountError
from .grnn import GRNNRegressor
from .linear import LinearRegressor
from .mlfn import MLFNRegressor, TrainConfig
from .sweep import DEFAULT_TRAIN_COUNT, ModelId, evaluate, run_sweep

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DATA = 4
EXIT_MISMATCH = 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _u64(text):
    try:
        return check_seed(int(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an unsigned 64-bit integer: {text!r}") from None


def _target(text):
    try:
        return TargetKind.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_model_spec(spec):
    """``linear`` | ``grnn`` | ``grnn:<sigma>`` | ``mlfn:<h>`` -> (ModelId, sigma or None)."""
    kind, _, arg = spec.strip().lower().partition(":")
    if kind == "linear" and not arg:
        return ModelId.linear(), None
    if kind == "grnn":
        if not arg:
            return ModelId.grnn(), None
        try:
            sigma = float(arg)
        except ValueError:
            raise UsageError(f"bad GRNN bandwidth in {spec!r}") from None
        if not sigma > 0 or sigma == float("inf"):
            raise UsageError(f"GRNN bandwidth must be positive, got {spec!r}")
        return ModelId.grnn(), sigma
    if kind == "mlfn":
        try:
            return ModelId.mlfn(int(arg)), None
        except ValueError:
            raise UsageError(f"MLFN needs a hidden count >= 1, got {spec!r}") from None
    raise UsageError(f"unknown model spec {spec!r}; use linear, grnn[:sigma] or mlfn:<h>")


def _add_mlfn_options(p):
    d = TrainConfig()
    p.add_argument("--learning-rate", type=float, default=d.learning_rate)
    p.add_argument("--momentum", type=float, default=d.momentum)
    p.add_argument("--max-epochs", type=int, default=d.max_epochs)
    p.add_argument("--patience", type=int, default=d.patience)
    p.add_argument("--init-scale", type=float, default=d.init_scale)


def _train_config(args, seed=0):
    try:
        return TrainConfig(
            learning_rate=args.learning_rate,
            momentum=args.momentum,
            max_epochs=args.max_epochs,
            patience=args.patience,
            seed=seed,
            init_scale=args.init_scale,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def build_parser():
    parser = _Parser(prog="boilrange", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen-data", help="write a seeded synthetic dataset as CSV")
    p.add_argument("--n", type=int, default=22)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--kind", choices=("nonlinear", "affine"), default="nonlinear")
    p.add_argument("--out", required=True)

    p = sub.add_parser("sweep", help="linear / GRNN / MLFN-h comparison ranked by test RMS")
    p.add_argument("--data", required=True)
    p.add_argument("--target", type=_target, required=True)
    p.add_argument("--train-count", type=int, default=DEFAULT_TRAIN_COUNT)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--mlfn-min", type=int, default=2)
    p.add_argument("--mlfn-max", type=int, default=30)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True, help="output directory")
    _add_mlfn_options(p)

    p = sub.add_parser("train", help="fit one model on the whole file and archive it")
    p.add_argument("--data", required=True)
    p.add_argument("--target", type=_target, required=True)
    p.add_argument("--model", required=True, help="linear | grnn[:sigma] | mlfn:<h>")
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--out", required=True)
    _add_mlfn_options(p)

    p = sub.add_parser("predict", help="score a feature file with an archived model")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("report", help="actual vs predicted pairs and RMS for a labeled file")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--target", type=_target, default=None)
    p.add_argument("--out", required=True)
    return parser


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _load_dataset(path, require_targets=True):
    ds = load_csv(path, require_targets=require_targets)
    for diag in validate(ds):
        print(f"warning: {path}: {diag.message}", file=sys.stderr)
    return ds


def cmd_gen_data(args):
    try:
        ds = generate_synthetic(args.n, args.seed, kind=args.kind)
    except DataError as exc:
        raise UsageError(str(exc)) from None
    _write(args.out, dumps_csv(ds))
    print(f"wrote {len(ds)} rows to {args.out}")
    return EXIT_OK


def cmd_sweep(args):
    if args.mlfn_min < 1 or args.mlfn_max < args.mlfn_min:
        raise UsageError(f"need 1 <= --mlfn-min <= --mlfn-max, got {args.mlfn_min}..{args.mlfn_max}")
    if args.jobs == 0:
        raise UsageError("--jobs must be non-zero")
    cfg = _train_config(args)
    ds = _load_dataset(args.data)
    ds.y(args.target)
    try:
        result = run_sweep(
            ds,
            args.target,
            args.train_count,
            args.seed,
            range(args.mlfn_min, args.mlfn_max + 1),
            mlfn_config=cfg,
            n_jobs=args.jobs,
        )
    except InvalidTrainCountError as exc:
        raise UsageError(str(exc)) from None

    os.makedirs(args.out, exist_ok=True)
    stem = f"sweep_{args.target.short}"
    _write(os.path.join(args.out, stem + ".csv"), result.to_csv())
    _write(os.path.join(args.out, stem + ".txt"), result.to_table())
    best = result.best_row
    meta = {
        "target": args.target.column,
        "model_id": str(best.model),
        "seed": args.seed,
        "dataset_fingerprint": result.split.train.fingerprint(),
        "source_fingerprint": ds.fingerprint(),
        "train_count": len(result.split.train),
        "train_rows": list(result.split.train_index),
        "notes": best.notes,
    }
    archive.save(result.models[best.model], os.path.join(args.out, f"best_{args.target.short}.json"), meta)
    flag = " (diverged)" if best.diverged else ""
    print(f"best: {best.model.label}  trained={best.trained} tested={best.tested} rms={best.rms:.6g}{flag}")
    return EXIT_OK


def cmd_train(args):
    model_id, sigma = parse_model_spec(args.model)
    ds = _load_dataset(args.data)
    X, y = ds.X, ds.y(args.target)
    if model_id.kind == "linear":
        model = LinearRegressor()
        config = {}
    elif model_id.kind == "grnn":
        model = GRNNRegressor(sigma=sigma)
        config = {"sigma": sigma}
    else:
        cfg = _train_config(args, args.seed)
        model = MLFNRegressor.from_config(model_id.hidden, cfg)
        config = {"hidden": model_id.hidden}
    model.fit(X, y)
    meta = {
        "target": args.target.column,
        "model_id": str(model_id),
        "seed": args.seed,
        "config": config,
        "dataset_fingerprint": ds.fingerprint(),
        "train_count": len(ds),
    }
    archive.save(model, args.out, meta)
    extra = f", {model.n_parameters_} parameters" if model_id.kind == "mlfn" else ""
    print(f"trained {model_id} on {len(ds)} rows{extra}; wrote {args.out}")
    return EXIT_OK


def _check_arity(model, n_features, path):
    if n_features != model.n_features_in_:
        raise ArityMismatchError(
            f"{path}: {n_features} feature columns, model expects {model.n_features_in_}"
        )


def cmd_predict(args):
    model, _ = archive.load(args.model)
    X = read_feature_matrix(args.data)
    _check_arity(model, X.shape[1], args.data)
    pred = model.predict(X)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["row", "prediction"])
    for i, v in enumerate(pred, start=1):
        w.writerow([i, repr(float(v))])
    _write(args.out, buf.getvalue())
    print(f"wrote {len(pred)} predictions to {args.out}")
    return EXIT_OK


def cmd_report(args):
    model, meta = archive.load(args.model)
    target = args.target
    if target is None:
        if "target" not in meta:
            raise UsageError("archive records no target; pass --target")
        target = TargetKind.parse(meta["target"])
    ds = _load_dataset(args.data)
    _check_arity(model, ds.n_features, args.data)
    report = evaluate(model, ds, target)

    fp = ds.fingerprint()
    on_training = fp == meta.get("dataset_fingerprint")
    if on_training:
        print(f"warning: {args.data} is the model's own training data", file=sys.stderr)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["actual", "predicted"])
    for a, p in report.pairs:
        w.writerow([repr(a), repr(p)])
    buf.write(
        f"# rms={report.rms!r} target={target.column} model={meta.get('model_id', archive.model_kind(model))}"
        f" n={len(report.pairs)} evaluated_on={'training' if on_training else 'other'}\n"
    )
    _write(args.out, buf.getvalue())
    print(f"rms={report.rms:.6g} over {len(report.pairs)} rows; wrote {args.out}")
    return EXIT_OK


COMMANDS = {
    "gen-data": cmd_gen_data,
    "sweep": cmd_sweep,
    "train": cmd_train,
    "predict": cmd_predict,
    "report": cmd_report,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(parser.format_usage().rstrip(), file=sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArchiveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ArityMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc.filename or ''}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    except UnicodeDecodeError as exc:
        print(f"error: input is not UTF-8: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
