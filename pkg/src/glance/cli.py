"""Command-line front end.

Subcommands: features, pores, series, phantom, classify. All output is
deterministic for fixed inputs, flags, and seeds: batch work may fan
out across threads (capped by GLANCE_THREADS), but emission is always
serialized in sorted input order with fixed float formatting.

Exit codes: 0 success, 2 usage or input error, 3 partial failure
(some inputs processed, some rejected).
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path

from .binarize import ThresholdConfig, ThresholdMode, binarize
from .classifier import (
    Combo,
    NetworkModel,
    evaluate,
    run_trials,
    split,
    train,
    trials_csv,
)
from .errors import GlanceError
from .features import (
    FeatureRecord,
    extract,
    flag_anomalies,
    records_to_csv,
    records_to_json,
)
from .grid import GrayImage, Polarity, dump_pgm, load_grid_csv, load_pgm
from .phantom import (
    PhantomKind,
    PhantomSpec,
    generate,
    generate_dataset_images,
    generate_series,
)
from .pores import label_pores, pore_table_csv

EXIT_OK = 0
EXIT_ERROR = 2
EXIT_PARTIAL = 3

MANIFEST_NAME = "manifest.csv"
MANIFEST_HEADER = "filename,class_label,u,z,y,w,n_p"

_LOAD_ERRORS = (GlanceError, OSError, UnicodeDecodeError)


def _max_workers() -> int | None:
    """Worker cap from GLANCE_THREADS; 0, unset, or junk = default."""
    raw = os.environ.get("GLANCE_THREADS", "").strip()
    if raw.isdigit() and int(raw) > 0:
        return int(raw)
    return None


def _threshold_value(text: str):
    if text == "auto":
        return "auto"
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"threshold must be 'auto' or 0..255, got {text!r}")
    if not 0 <= value <= 255:
        raise argparse.ArgumentTypeError(f"threshold {value} outside 0..255")
    return value


def _threshold_config(args: argparse.Namespace) -> ThresholdConfig:
    polarity = Polarity.DARK_BACKGROUND if args.polarity == "dark" else Polarity.LIGHT_BACKGROUND
    if args.threshold == "auto":
        return ThresholdConfig(mode=ThresholdMode.OTSU, polarity=polarity)
    return ThresholdConfig(
        mode=ThresholdMode.MANUAL, manual_value=args.threshold, polarity=polarity
    )


def _add_threshold_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--threshold", type=_threshold_value, default="auto", metavar="auto|0..255",
        help="binarization threshold: 'auto' picks it per image (default), an integer fixes it",
    )
    parser.add_argument(
        "--polarity", choices=("dark", "light"), default="dark",
        help="which intensity side is background (default: dark)",
    )


def _load_image(path: str) -> GrayImage:
    data = Path(path).read_bytes()
    if data[:2] in (b"P2", b"P5"):
        return load_pgm(data)
    return load_grid_csv(data.decode("utf-8"))


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", newline="") as handle:
            handle.write(text)


def _fail(message: str) -> int:
    sys.stderr.write(f"glance: error: {message}\n")
    return EXIT_ERROR


def _fail_exc(exc: Exception) -> int:
    return _fail(f"{type(exc).__name__}: {exc}")


def _extract_batch(
    jobs: list[tuple[str, str]], cfg: ThresholdConfig
) -> tuple[dict[int, FeatureRecord], list[tuple[int, str, str]]]:
    """Extract features for (path, source_id) jobs, possibly in parallel.
    Returns records keyed by job index plus (index, path, message) failures."""

    def work(index: int, path: str, source_id: str):
        return index, extract(_load_image(path), cfg, source_id=source_id)

    records: dict[int, FeatureRecord] = {}
    failures: list[tuple[int, str, str]] = []
    with ThreadPoolExecutor(max_workers=_max_workers()) as pool:
        futures = {
            pool.submit(work, i, path, source_id): (i, path)
            for i, (path, source_id) in enumerate(jobs)
        }
        for future in as_completed(futures):
            index, path = futures[future]
            try:
                _, record = future.result()
                records[index] = record
            except _LOAD_ERRORS as exc:
                failures.append((index, path, str(exc)))
    failures.sort()
    return records, failures


# ---------------------------
# features
# ---------------------------

def cmd_features(args: argparse.Namespace) -> int:
    paths = sorted(args.paths)
    cfg = _threshold_config(args)
    records, failures = _extract_batch([(p, p) for p in paths], cfg)
    for _, path, message in failures:
        sys.stderr.write(f"glance features: {path}: {message}\n")
    ordered = [records[i] for i in sorted(records)]
    if not ordered:
        return EXIT_ERROR
    if args.format == "json":
        text = records_to_json(ordered)
    else:
        text = records_to_csv(ordered)
    _emit(text, args.out)
    return EXIT_PARTIAL if failures else EXIT_OK


# ---------------------------
# pores
# ---------------------------

def cmd_pores(args: argparse.Namespace) -> int:
    cfg = _threshold_config(args)
    try:
        img = _load_image(args.path)
        binary = binarize(img, cfg)
        pm = label_pores(binary)
    except _LOAD_ERRORS as exc:
        return _fail(f"{args.path}: {exc}")
    _emit(pore_table_csv(pm, binary.foreground_count), args.out)
    return EXIT_OK


# ---------------------------
# series
# ---------------------------

def cmd_series(args: argparse.Namespace) -> int:
    directory = args.directory
    if not os.path.isdir(directory):
        return _fail(f"{directory}: not a directory")
    names = sorted(
        name for name in os.listdir(directory)
        if os.path.isfile(os.path.join(directory, name)) and name != MANIFEST_NAME
    )
    cfg = _threshold_config(args)
    jobs = [(os.path.join(directory, name), name) for name in names]
    records, failures = _extract_batch(jobs, cfg)
    for _, path, message in failures:
        sys.stderr.write(f"glance series: {path}: {message}\n")
    ordered = [records[i] for i in sorted(records)]
    if len(ordered) < 3:
        return _fail(f"{directory}: {len(ordered)} usable slices, need at least 3")
    report = flag_anomalies(ordered, k=args.k)
    _emit(report.to_csv(), args.out)
    if args.plot_dir is not None:
        from .report import render_series_figures

        render_series_figures(report, args.plot_dir)
    return EXIT_PARTIAL if failures else EXIT_OK


# ---------------------------
# phantom
# ---------------------------

def _manifest_row(filename: str, label: str, rec: FeatureRecord) -> str:
    return f"{filename},{label},{rec.u},{rec.z},{rec.y},{rec.w},{rec.n_p}"


def _phantom_dataset(args: argparse.Namespace, out_dir: str) -> list[str]:
    triples = generate_dataset_images(args.n, args.seed)
    rows = []
    for img, rec, label in triples:
        if args.classes == 2:
            label = "with_eyes" if label == "eyes" else "without_eyes"
        filename = f"{rec.source_id}.pgm"
        with open(os.path.join(out_dir, filename), "wb") as handle:
            handle.write(dump_pgm(img))
        rows.append(_manifest_row(filename, label, rec))
    return rows


def _phantom_series(args: argparse.Namespace, out_dir: str) -> list[str]:
    spec = PhantomSpec(
        kind=PhantomKind.SLICE_SERIES,
        length=args.length,
        fault_index=args.fault_index,
        seed=args.seed,
    )
    fault = args.fault_index if args.fault_index is not None else args.length - 1
    rows = []
    for i, (img, rec) in enumerate(generate_series(spec)):
        filename = f"{rec.source_id}.pgm"
        with open(os.path.join(out_dir, filename), "wb") as handle:
            handle.write(dump_pgm(img))
        rows.append(_manifest_row(filename, "faulty" if i == fault else "normal", rec))
    return rows


def _phantom_single(args: argparse.Namespace, out_dir: str) -> list[str]:
    kind = PhantomKind(args.kind)
    img, rec = generate(PhantomSpec(kind=kind, seed=args.seed))
    filename = f"{rec.source_id}.pgm"
    with open(os.path.join(out_dir, filename), "wb") as handle:
        handle.write(dump_pgm(img))
    return [_manifest_row(filename, args.kind, rec)]


def cmd_phantom(args: argparse.Namespace) -> int:
    out_dir = args.out_dir
    try:
        os.makedirs(out_dir, exist_ok=True)
        if args.kind == "dataset":
            rows = _phantom_dataset(args, out_dir)
        elif args.kind == "slice-series":
            rows = _phantom_series(args, out_dir)
        else:
            rows = _phantom_single(args, out_dir)
    except (GlanceError, OSError) as exc:
        return _fail(str(exc))
    manifest = MANIFEST_HEADER + "\n" + "\n".join(rows) + "\n"
    with open(os.path.join(out_dir, MANIFEST_NAME), "w", newline="") as handle:
        handle.write(manifest)
    return EXIT_OK


# ---------------------------
# classify
# ---------------------------

def _load_labeled_dir(data_dir: str, cfg: ThresholdConfig) -> list[tuple[FeatureRecord, str]]:
    """Read a phantom-style directory: manifest.csv names files + labels."""
    manifest_path = os.path.join(data_dir, MANIFEST_NAME)
    with open(manifest_path, "r", newline="") as handle:
        lines = handle.read().splitlines()
    if not lines or lines[0] != MANIFEST_HEADER:
        raise GlanceError(f"{manifest_path}: expected header {MANIFEST_HEADER!r}")
    pairs = []
    for line in lines[1:]:
        cells = line.split(",")
        if len(cells) != 7:
            raise GlanceError(f"{manifest_path}: malformed row {line!r}")
        pairs.append((cells[0], cells[1]))
    jobs = [(os.path.join(data_dir, filename), filename) for filename, _ in pairs]
    records, failures = _extract_batch(jobs, cfg)
    if failures:
        _, path, message = failures[0]
        raise GlanceError(f"{path}: {message}")
    return [(records[i], label) for i, (_, label) in enumerate(pairs)]


def cmd_classify_train(args: argparse.Namespace) -> int:
    cfg = _threshold_config(args)
    try:
        items = _load_labeled_dir(args.data, cfg)
        parts = split(items, args.seed)
        model = train(parts, Combo[args.combo], args.seed)
    except _LOAD_ERRORS as exc:
        return _fail(str(exc))
    _emit(model.to_json(), args.out)
    return EXIT_OK


def cmd_classify_eval(args: argparse.Namespace) -> int:
    cfg = _threshold_config(args)
    try:
        with open(args.model, "r") as handle:
            model = NetworkModel.from_json(handle.read())
        items = _load_labeled_dir(args.data, cfg)
        which = Combo[args.combo] if args.combo is not None else None
        matrix = evaluate(model, items, which)
    except (ValueError, KeyError) as exc:
        return _fail(f"{args.model}: {exc}")
    except _LOAD_ERRORS as exc:
        return _fail_exc(exc)
    text = matrix.to_csv() + f"accuracy,{matrix.accuracy:.6f}\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_classify_trials(args: argparse.Namespace) -> int:
    cfg = _threshold_config(args)
    try:
        items = _load_labeled_dir(args.data, cfg)
        summary = run_trials(items, Combo[args.combo], args.trials, args.seed)
    except _LOAD_ERRORS as exc:
        return _fail(str(exc))
    _emit(trials_csv(summary), args.out)
    return EXIT_OK


# ---------------------------
# parser wiring
# ---------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="glance",
        description="Binary image features: packing, compactness, scatterness, porousness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_features = sub.add_parser("features", help="feature records for one or more images")
    p_features.add_argument("paths", nargs="+", metavar="PATH", help="PGM or grid CSV inputs")
    _add_threshold_flags(p_features)
    p_features.add_argument("--format", choices=("csv", "json"), default="csv")
    p_features.add_argument("--out", default=None, help="write here instead of stdout")
    p_features.set_defaults(func=cmd_features)

    p_pores = sub.add_parser("pores", help="per-pore area table for one image")
    p_pores.add_argument("path", metavar="PATH")
    _add_threshold_flags(p_pores)
    p_pores.add_argument("--out", default=None)
    p_pores.set_defaults(func=cmd_pores)

    p_series = sub.add_parser("series", help="per-slice features with anomaly flags")
    p_series.add_argument("directory", metavar="DIR")
    _add_threshold_flags(p_series)
    p_series.add_argument("--k", type=float, default=5.0,
                          help="flag slices with w_avg > k x series median (default 5)")
    p_series.add_argument("--out", default=None)
    p_series.add_argument("--plot-dir", default=None,
                          help="also render per-feature PNG charts into this directory")
    p_series.set_defaults(func=cmd_series)

    p_phantom = sub.add_parser("phantom", help="write synthetic images with known counts")
    p_phantom.add_argument("--kind", default="dataset",
                           choices=("dataset", "slice-series", "rect", "rect-with-hole",
                                    "ring", "scatter-dots"))
    p_phantom.add_argument("--classes", type=int, choices=(2, 3), default=3,
                           help="label scheme for --kind dataset")
    p_phantom.add_argument("--n", type=int, default=50, help="items per class (dataset)")
    p_phantom.add_argument("--length", type=int, default=32, help="slices (slice-series)")
    p_phantom.add_argument("--fault-index", type=int, default=None,
                           help="position of the faulty slice (default: last)")
    p_phantom.add_argument("--seed", type=int, default=0)
    p_phantom.add_argument("--out-dir", required=True)
    p_phantom.set_defaults(func=cmd_phantom)

    p_classify = sub.add_parser("classify", help="train/evaluate the feature classifier")
    c_sub = p_classify.add_subparsers(dest="action", required=True)

    p_train = c_sub.add_parser("train", help="fit a model on a labeled phantom directory")
    p_train.add_argument("--data", required=True, help="directory with manifest.csv + images")
    p_train.add_argument("--combo", choices=tuple(c.name for c in Combo), required=True)
    p_train.add_argument("--seed", type=int, default=0)
    _add_threshold_flags(p_train)
    p_train.add_argument("--out", default=None, help="model JSON path (default: stdout)")
    p_train.set_defaults(func=cmd_classify_train)

    p_eval = c_sub.add_parser("eval", help="confusion matrix of a saved model")
    p_eval.add_argument("--model", required=True)
    p_eval.add_argument("--data", required=True)
    p_eval.add_argument("--combo", choices=tuple(c.name for c in Combo), default=None,
                        help="override the combo used to read features")
    _add_threshold_flags(p_eval)
    p_eval.add_argument("--out", default=None)
    p_eval.set_defaults(func=cmd_classify_eval)

    p_trials = c_sub.add_parser("trials", help="repeated split/train/test accuracy table")
    p_trials.add_argument("--data", required=True)
    p_trials.add_argument("--combo", choices=tuple(c.name for c in Combo), required=True)
    p_trials.add_argument("--trials", type=int, default=10)
    p_trials.add_argument("--seed", type=int, default=0)
    _add_threshold_flags(p_trials)
    p_trials.add_argument("--out", default=None)
    p_trials.set_defaults(func=cmd_classify_trials)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
