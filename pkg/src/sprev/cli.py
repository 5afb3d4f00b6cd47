"""Command-line interface: embed, cull, bench and ortho subcommands.

Option values resolve as flag > config file > default.  Config files are
flat key=value lines (keys match flag names without the leading dashes,
"#" starts a comment line); unknown keys are rejected.  Exit codes: 0 on
success, 2 on any input or validation problem (one diagnostic line on
stderr), 1 on internal errors.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import time
from dataclasses import dataclass
from typing import Any, Callable

from . import bench as bench_mod
from . import datasets, ortho_sim, render
from .core import EmbedConfig, WeightKernel
from .errors import SprevError
from .layout import embed as embed_pipeline
from .metrics import MetricKind


class CliError(Exception):
    """User-facing problem; maps to exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep diagnostics to a single stderr line
        raise CliError(message)


@dataclass
class _Opt:
    name: str  # flag name without dashes, also the config file key
    convert: Callable[[str], Any]
    default: Any = None
    help: str = ""

    @property
    def dest(self) -> str:
        return self.name.replace("-", "_")


def _comma_ints(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise ValueError(f"expected comma-separated integers, got {text!r}") from None


def _comma_names(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip() != ""]


_COMMON = [
    _Opt("config", str, help="flat key=value config file"),
    _Opt("seed", int, 0, "64-bit seed driving all randomness"),
    _Opt("threads", int, None, "worker threads (default: SPREV_THREADS or 1)"),
]

_INPUT = [
    _Opt("input", str, help="labeled CSV input"),
    _Opt("label-column", str, "label", "label column name for CSV input"),
    _Opt("idx-images", str, help="IDX image file (use with --idx-labels)"),
    _Opt("idx-labels", str, help="IDX label file (use with --idx-images)"),
]

_EMBED_CFG = [
    _Opt("metric", str, "euclidean", "euclidean, manhattan or cosine"),
    _Opt("kernel", str, "inverse", "weight kernel: inverse or softmax"),
    _Opt("epsilon", float, 1e-12, "inverse kernel regularizer"),
    _Opt("temperature", float, 1.0, "softmax kernel temperature"),
]

_OPTIONS: dict[str, list[_Opt]] = {
    "embed": _COMMON + _INPUT + _EMBED_CFG + [
        _Opt("out-csv", str, help="write embedded points as x,y,label CSV"),
        _Opt("out-svg", str, help="write embedding scatter plot SVG"),
    ],
    "cull": _COMMON + _INPUT + [
        _Opt("classes", int, help="number of classes to keep"),
        _Opt("fraction", float, help="fraction of each kept class to keep"),
        _Opt("out", str, help="output CSV path"),
    ],
    "bench": _COMMON + _INPUT + _EMBED_CFG + [
        _Opt("k", _comma_ints, [5], "comma-separated kNN sizes"),
        _Opt("folds", int, 10, "cross-validation fold count"),
        _Opt("methods", _comma_names, ["sprev", "pca"], "subset of sprev,pca"),
        _Opt("out-folds", str, help="write per-fold accuracies CSV"),
        _Opt("out-summary", str, help="write summary CSV"),
    ],
    "ortho": _COMMON + [
        _Opt("dims", _comma_ints, [2, 4, 8, 16, 32, 64, 128, 256, 512, 1024],
             "comma-separated dimensions"),
        _Opt("pairs", int, 1000, "random vector pairs per dimension"),
        _Opt("out-csv", str, help="write per-dimension statistics CSV"),
        _Opt("out-svg", str, help="write mean |cos| curve SVG"),
    ],
}


def _read_config(path: str, known: set[str]) -> dict[str, str]:
    values: dict[str, str] = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc.strerror}") from None
    for line_no, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if "=" not in text:
            raise CliError(f"{path}:{line_no}: expected key=value, got {text!r}")
        key, _, value = text.partition("=")
        key = key.strip()
        if key not in known or key == "config":
            raise CliError(f"{path}:{line_no}: unknown config key {key!r}")
        values[key] = value.strip()
    return values


def _resolve(args: argparse.Namespace, opts: list[_Opt]) -> dict[str, Any]:
    """Merge flag, config and default values; flags win, defaults lose."""
    table = {opt.name: opt for opt in opts}
    config_values: dict[str, str] = {}
    config_path = getattr(args, "config", None)
    if config_path is not None:
        config_values = _read_config(config_path, set(table))

    out: dict[str, Any] = {}
    for opt in opts:
        value = getattr(args, opt.dest)
        if value is None and opt.name in config_values:
            try:
                value = opt.convert(config_values[opt.name])
            except ValueError as exc:
                raise CliError(f"config key {opt.name!r}: {exc}") from None
        if value is None:
            value = opt.default
        out[opt.name] = value
    if out["threads"] is None:
        env = os.environ.get("SPREV_THREADS")
        try:
            out["threads"] = int(env) if env is not None else 1
        except ValueError:
            raise CliError(f"SPREV_THREADS must be an integer, got {env!r}") from None
    if out["threads"] < 1:
        raise CliError(f"threads must be >= 1, got {out['threads']}")
    return out


def _load_dataset(values: dict[str, Any]) -> datasets.LabeledDataset:
    has_csv = values["input"] is not None
    has_idx = values["idx-images"] is not None or values["idx-labels"] is not None
    if has_csv and has_idx:
        raise CliError("give either --input or an IDX pair, not both")
    if has_csv:
        return datasets.load_csv(values["input"], values["label-column"])
    if values["idx-images"] is None or values["idx-labels"] is None:
        raise CliError("IDX input needs both --idx-images and --idx-labels")
    return datasets.load_idx(values["idx-images"], values["idx-labels"])


def _embed_config(values: dict[str, Any]) -> EmbedConfig:
    try:
        return EmbedConfig(
            metric=MetricKind.from_name(values["metric"]),
            kernel=WeightKernel.from_name(values["kernel"]),
            epsilon=values["epsilon"],
            temperature=values["temperature"],
            seed=values["seed"],
        )
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _write_points_csv(emb, path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "y", "label"])
        for (x, y), label in zip(emb.points, emb.labels):
            writer.writerow([format(x, ".6g"), format(y, ".6g"), emb.class_names[label]])


def _cmd_embed(values: dict[str, Any]) -> int:
    if values["out-csv"] is None and values["out-svg"] is None:
        raise CliError("nothing to do: give --out-csv and/or --out-svg")
    ds = _load_dataset(values)
    cfg = _embed_config(values)
    start = time.perf_counter()
    emb = embed_pipeline(ds, cfg)
    elapsed = time.perf_counter() - start
    print(f"embedded {ds.num_samples} samples in {elapsed:.6f} s", file=sys.stderr)
    if values["out-csv"] is not None:
        _write_points_csv(emb, values["out-csv"])
    if values["out-svg"] is not None:
        with open(values["out-svg"], "wb") as fh:
            fh.write(render.render_embedding(emb))
    return 0


def _cmd_cull(values: dict[str, Any]) -> int:
    for required in ("classes", "fraction", "out"):
        if values[required] is None:
            raise CliError(f"--{required} is required for cull")
    ds = _load_dataset(values)
    try:
        spec = datasets.CullSpec(values["classes"], values["fraction"], values["seed"])
    except ValueError as exc:
        raise CliError(str(exc)) from None
    culled = datasets.cull(ds, spec)
    datasets.write_csv(culled, values["out"])
    print(
        f"kept {culled.num_samples} of {ds.num_samples} samples "
        f"across {culled.num_classes} classes",
        file=sys.stderr,
    )
    return 0


def _cmd_bench(values: dict[str, Any]) -> int:
    ds = _load_dataset(values)
    cfg = _embed_config(values)
    methods = ["pca" if m == "pca2d" else m for m in values["methods"]]
    try:
        spec = bench_mod.BenchSpec(values["k"], values["folds"], values["seed"], methods)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    results = bench_mod.run_bench(ds, cfg, spec)
    for result in results:
        print(
            f"{result.method} k={result.k}: mean accuracy {result.mean_accuracy:.4f} "
            f"(embed {result.wall_clock_embed:.3f} s)",
            file=sys.stderr,
        )
    if values["out-folds"] is not None:
        with open(values["out-folds"], "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["method", "k", "fold", "accuracy"])
            for result in results:
                for fold, accuracy in enumerate(result.fold_accuracies):
                    writer.writerow([result.method, result.k, fold, format(accuracy, ".6g")])
    if values["out-summary"] is not None:
        with open(values["out-summary"], "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["method", "k", "mean_accuracy", "std_accuracy"])
            for result in results:
                writer.writerow([
                    result.method,
                    result.k,
                    format(result.mean_accuracy, ".6g"),
                    format(result.std_accuracy, ".6g"),
                ])
    return 0


def _cmd_ortho(values: dict[str, Any]) -> int:
    try:
        spec = ortho_sim.OrthoRunSpec(values["dims"], values["pairs"], values["seed"])
    except ValueError as exc:
        raise CliError(str(exc)) from None
    start = time.perf_counter()
    results = ortho_sim.run_ortho_sim(spec, threads=values["threads"])
    elapsed = time.perf_counter() - start
    print(f"simulated {values['pairs']} pairs per dimension in {elapsed:.3f} s", file=sys.stderr)
    if values["out-csv"] is not None:
        with open(values["out-csv"], "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["dim", "mean_abs_cos", "max_abs_cos", "frac_exceeding_eps", "epsilon"])
            for r in results:
                writer.writerow([
                    r.dim,
                    format(r.mean_abs_cos, ".6g"),
                    format(r.max_abs_cos, ".6g"),
                    format(r.frac_exceeding_eps, ".6g"),
                    format(ortho_sim.epsilon_threshold(r.dim), ".6g"),
                ])
    if values["out-svg"] is not None:
        if len(results) < 2:
            raise CliError("--out-svg needs at least 2 dimensions to draw a curve")
        dims = [r.dim for r in results]
        curves = [
            render.CurveSeries(dims, [r.mean_abs_cos for r in results], "mean |cos|"),
            render.CurveSeries(
                dims, [ortho_sim.epsilon_threshold(n) for n in dims], "epsilon threshold"
            ),
        ]
        with open(values["out-svg"], "wb") as fh:
            fh.write(render.render_curve(curves, x_label="dimension", y_label="|cos|"))
    return 0


_COMMANDS = {
    "embed": _cmd_embed,
    "cull": _cmd_cull,
    "bench": _cmd_bench,
    "ortho": _cmd_ortho,
}


def _build_parser() -> _Parser:
    parser = _Parser(prog="sprev", description="polygon embeddings for labeled data")
    subparsers = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "embed": "embed a labeled dataset into the plane",
        "cull": "keep a random subset of classes and samples",
        "bench": "cross-validate kNN accuracy on 2-D projections",
        "ortho": "simulate near-orthogonality of random sign vectors",
    }
    for command, opts in _OPTIONS.items():
        sub = subparsers.add_parser(command, help=descriptions[command])
        for opt in opts:
            sub.add_argument(f"--{opt.name}", dest=opt.dest, default=None,
                             type=str if opt.convert in (_comma_ints, _comma_names) else opt.convert,
                             help=opt.help)
    return parser


def _run(argv: list[str]) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    opts = _OPTIONS[args.command]
    # comma-list flags arrive as raw strings; convert them like config values
    for opt in opts:
        if opt.convert in (_comma_ints, _comma_names):
            raw = getattr(args, opt.dest)
            if raw is not None:
                try:
                    setattr(args, opt.dest, opt.convert(raw))
                except ValueError as exc:
                    raise CliError(f"--{opt.name}: {exc}") from None
    values = _resolve(args, opts)
    return _COMMANDS[args.command](values)


def main(argv: list[str] | None = None) -> int:
    try:
        return _run(sys.argv[1:] if argv is None else list(argv))
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SprevError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - safety net
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
