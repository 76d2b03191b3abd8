"""Command-line entry point.

Subcommands: bench, sweep-rho, overfit, baseline, gradcheck, gen-data.
Every run writes its outputs into a content-addressed directory
``<outdir>/<command>-<confighash>-s<seed>`` together with a ``manifest.cfg``
holding the fully resolved configuration; re-running from that manifest
(``--config manifest.cfg``) reproduces byte-identical CSV outputs.  The
output root comes from ``--outdir`` or the ``CVNN_BENCH_OUTDIR`` environment
variable (default ``./runs``).

Config files are flat UTF-8 ``key = value`` text; ``#`` starts a comment.
Values given on the command line override the config file, which overrides
the defaults.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import baseline as baseline_mod
from . import datagen, experiments, gradcheck
from .experiments import ExperimentConfig

__all__ = ["main", "parse_config", "ConfigError", "resolve_config", "run_directory"]


class ConfigError(ValueError):
    """Invalid configuration key or value."""


def _parse_rhos(text: str):
    return tuple(float(tok) for tok in text.replace(";", ",").split(",") if tok.strip())


_INT_KEYS = ("trials", "epochs", "batch_size", "n_per_class", "features", "seed")
_FLOAT_KEYS = ("rho", "learning_rate", "dropout", "train_fraction")
_STR_KEYS = ("preset", "arch", "rvnn_input", "command")

DEFAULTS = {
    "preset": "A",
    "rho": 0.3,
    "arch": "2HL",
    "trials": 30,
    "epochs": 300,
    "batch_size": 100,
    "learning_rate": 0.01,
    "dropout": 0.5,
    "n_per_class": 10000,
    "features": 128,
    "train_fraction": 0.8,
    "rvnn_input": "cartesian",
    "seed": 0,
    "rhos": (0.2, 0.3, 0.4, 0.5, 0.6, 0.7),
}


def _check_range(key: str, value):
    ok = True
    if key in ("trials", "epochs", "batch_size", "n_per_class", "features"):
        ok = value >= 1
    elif key == "learning_rate":
        ok = value > 0
    elif key in ("dropout",):
        ok = 0.0 <= value < 1.0
    elif key == "rho":
        ok = abs(value) < 1.0
    elif key == "rhos":
        ok = len(value) > 0 and all(abs(r) < 1.0 for r in value)
    elif key == "train_fraction":
        ok = 0.0 < value < 1.0
    elif key == "preset":
        ok = value in ("A", "B", "C", "sweep")
    elif key == "arch":
        ok = value in ("1HL", "2HL")
    elif key == "rvnn_input":
        ok = value in ("cartesian", "polar")
    if not ok:
        raise ConfigError(f"value out of range for key '{key}': {value!r}")


def _convert(key: str, raw: str):
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key == "rhos":
            return _parse_rhos(raw)
        if key in _STR_KEYS:
            return raw
    except ValueError:
        raise ConfigError(f"cannot parse value for key '{key}': {raw!r}") from None
    raise ConfigError(f"unknown key '{key}'")


def parse_config(text: str) -> dict:
    """Parse flat key=value text into a fully resolved configuration dict."""
    resolved = dict(DEFAULTS)
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in DEFAULTS and key != "command":
            raise ConfigError(f"line {lineno}: unknown key '{key}'")
        value = _convert(key, raw)
        if key != "command":
            _check_range(key, value)
        resolved[key] = value
    return resolved


def resolve_config(args: argparse.Namespace) -> dict:
    """Defaults < config file < command-line flags."""
    resolved = dict(DEFAULTS)
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        resolved.update(parse_config(path.read_text()))
    for key in DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            value = _convert(key, flag) if isinstance(flag, str) and key == "rhos" else flag
            _check_range(key, value)
            resolved[key] = value
    resolved.pop("command", None)
    return resolved


def experiment_config(resolved: dict) -> ExperimentConfig:
    try:
        return ExperimentConfig(
            preset=resolved["preset"],
            rho=resolved["rho"],
            n_per_class=resolved["n_per_class"],
            feature_len=resolved["features"],
            architecture=resolved["arch"],
            dropout_rate=resolved["dropout"],
            trials=resolved["trials"],
            epochs=resolved["epochs"],
            batch_size=resolved["batch_size"],
            learning_rate=resolved["learning_rate"],
            train_fraction=resolved["train_fraction"],
            rvnn_input=resolved["rvnn_input"],
            master_seed=resolved["seed"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def manifest_text(command: str, resolved: dict) -> str:
    lines = [f"command = {command}"]
    for key in sorted(DEFAULTS):
        value = resolved[key]
        if key == "rhos":
            value = ",".join(repr(float(r)) for r in value)
        elif isinstance(value, float):
            value = repr(value)
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def run_directory(command: str, resolved: dict, outdir: Path, force: bool) -> Path:
    """Content-addressed run directory <command>-<hash12>-s<seed>."""
    digest = hashlib.sha256(manifest_text(command, resolved).encode()).hexdigest()[:12]
    run_dir = outdir / f"{command}-{digest}-s{resolved['seed']}"
    if run_dir.exists() and not force:
        raise ConfigError(
            f"run directory already exists: {run_dir} (use --force to overwrite)"
        )
    run_dir.mkdir(parents=True, exist_ok=True)
    (run_dir / "manifest.cfg").write_text(manifest_text(command, resolved))
    return run_dir


def _add_common_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="flat key=value config file (e.g. an emitted manifest)")
    p.add_argument("--preset", choices=["A", "B", "C", "sweep"])
    p.add_argument("--rho", type=float)
    p.add_argument("--arch", choices=["1HL", "2HL"])
    p.add_argument("--trials", type=int)
    p.add_argument("--epochs", type=int)
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.add_argument("--learning-rate", dest="learning_rate", type=float)
    p.add_argument("--dropout", type=float)
    p.add_argument("--n-per-class", dest="n_per_class", type=int)
    p.add_argument("--features", type=int)
    p.add_argument("--train-fraction", dest="train_fraction", type=float)
    p.add_argument("--rvnn-input", dest="rvnn_input", choices=["cartesian", "polar"])
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, default=1, help="parallel trial processes")
    p.add_argument("--outdir", help="output root (default $CVNN_BENCH_OUTDIR or ./runs)")
    p.add_argument("--force", action="store_true", help="overwrite an existing run directory")


def _outdir(args) -> Path:
    return Path(args.outdir or os.environ.get("CVNN_BENCH_OUTDIR", "runs"))


def _cmd_bench(args, command="bench") -> int:
    resolved = resolve_config(args)
    if command == "overfit":
        resolved["dropout"] = 0.0
    config = experiment_config(resolved)
    run_dir = run_directory(command, resolved, _outdir(args), args.force)
    summary = experiments.run_monte_carlo(config, workers=args.workers)
    experiments.write_trials_csv(summary, run_dir / "trials.csv")
    experiments.write_epochs_csv(summary, run_dir / "epochs.csv")
    experiments.write_summary_csv(summary, run_dir / "summary.csv")
    print(f"run directory: {run_dir}")
    for label, s in (("cvnn", summary.cvnn), (config.rvnn_label, summary.rvnn)):
        print(
            f"{label}: median {s.median:.2f} +/- {s.median_error:.2f} "
            f"mean {s.mean:.2f} +/- {s.mean_se:.2f} range [{s.minimum:.2f}, {s.maximum:.2f}]"
        )
    return 0


def _cmd_overfit(args) -> int:
    return _cmd_bench(args, command="overfit")


def _cmd_sweep(args) -> int:
    resolved = resolve_config(args)
    config = experiment_config(resolved)
    run_dir = run_directory("sweep-rho", resolved, _outdir(args), args.force)
    points = experiments.sweep_correlation(resolved["rhos"], config, workers=args.workers)
    experiments.write_box_csv(points, run_dir / "boxplot.csv")
    with open(run_dir / "summary.csv", "w", newline="\n") as fh:
        fh.write("rho,model,n_trials,median,median_error,mean,mean_se,q1,q3,min,max\n")
        for p in points:
            for label, s in (("cvnn", p.summary.cvnn), (config.rvnn_label, p.summary.rvnn)):
                cells = [repr(p.rho), label, str(s.n)] + [
                    repr(v)
                    for v in (s.median, s.median_error, s.mean, s.mean_se, s.q1, s.q3, s.minimum, s.maximum)
                ]
                fh.write(",".join(cells) + "\n")
    print(f"run directory: {run_dir}")
    for p in points:
        print(
            f"rho={p.rho:g}: cvnn median {p.summary.cvnn.median:.2f}, "
            f"{config.rvnn_label} median {p.summary.rvnn.median:.2f}"
        )
    return 0


def _cmd_baseline(args) -> int:
    resolved = resolve_config(args)
    run_dir = run_directory("baseline", resolved, _outdir(args), args.force)
    if resolved["preset"] == "sweep":
        classes = datagen.sweep_pair(resolved["rho"])
    else:
        classes = datagen.preset_classes(resolved["preset"])
    rng = np.random.default_rng(np.random.SeedSequence([resolved["seed"], 0]))
    accuracy = baseline_mod.baseline_accuracy(
        classes, resolved["n_per_class"], resolved["features"], rng
    )
    with open(run_dir / "baseline.csv", "w", newline="\n") as fh:
        fh.write("preset,rho,features,n_per_class,accuracy\n")
        fh.write(
            f"{resolved['preset']},{resolved['rho']!r},{resolved['features']},"
            f"{resolved['n_per_class']},{accuracy!r}\n"
        )
    print(f"run directory: {run_dir}")
    print(f"nearest-tau baseline accuracy: {accuracy:.4f}")
    return 0


def _cmd_gradcheck(args) -> int:
    resolved = resolve_config(args)
    run_dir = run_directory("gradcheck", resolved, _outdir(args), args.force)
    report = gradcheck.run_gradient_check_suite(n_pairs=args.pairs, seed=resolved["seed"] or 2024)
    primitive = gradcheck.activation_primitive_errors(seed=resolved["seed"] or 7)
    convention = gradcheck.run_convention_suite(seed=resolved["seed"] or 11)
    lines = report.lines()
    lines.append("activation primitives vs numeric oracle (tolerance 1e-06):")
    for kind in sorted(primitive):
        lines.append(f"  {kind:<28s} max relative error {primitive[kind]:.3e}")
    lines.append("gradient convention agreement (tolerance 1e-10):")
    for kind in sorted(convention):
        lines.append(f"  {kind:<28s} max gap {convention[kind]:.3e}")
    ok = report.passed and max(primitive.values()) <= 1e-6 and max(convention.values()) <= 1e-10
    lines.append(f"gradcheck: {'PASS' if ok else 'FAIL'}")
    text = "\n".join(lines)
    print(text)
    (run_dir / "report.txt").write_text(text + "\n")
    return 0 if ok else 1


def _cmd_gen_data(args) -> int:
    resolved = resolve_config(args)
    run_dir = run_directory("gen-data", resolved, _outdir(args), args.force)
    rng = np.random.default_rng(np.random.SeedSequence([resolved["seed"], 0]))
    if resolved["preset"] == "sweep":
        classes = datagen.sweep_pair(resolved["rho"])
    else:
        classes = datagen.preset_classes(resolved["preset"])
    ds = datagen.make_dataset(classes, resolved["n_per_class"], resolved["features"], rng)
    if args.format in ("csv", "both"):
        datagen.save_csv(ds, run_dir / "dataset.csv")
    if args.format in ("bin", "both"):
        datagen.save_binary(ds, run_dir / "dataset.bin")
    print(f"run directory: {run_dir}")
    print(f"wrote {ds.n_samples} samples x {ds.feature_len} features ({args.format})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvnn-bench",
        description="Complex-vs-real network benchmark on non-circular complex Gaussian data",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bench", help="paired CVNN/RVNN Monte-Carlo benchmark")
    _add_common_flags(p)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("sweep-rho", help="correlation-coefficient sweep (box-plot data)")
    _add_common_flags(p)
    p.add_argument("--rhos", help="comma-separated correlation values")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("overfit", help="benchmark with dropout disabled")
    _add_common_flags(p)
    p.set_defaults(func=_cmd_overfit)

    p = sub.add_parser("baseline", help="nearest-pseudo-variance classifier accuracy")
    _add_common_flags(p)
    p.set_defaults(func=_cmd_baseline)

    p = sub.add_parser("gradcheck", help="finite-difference gradient verification suite")
    _add_common_flags(p)
    p.add_argument("--pairs", type=int, default=100, help="number of (model, batch) pairs")
    p.set_defaults(func=_cmd_gradcheck)

    p = sub.add_parser("gen-data", help="generate and export a dataset")
    _add_common_flags(p)
    p.add_argument("--format", choices=["csv", "bin", "both"], default="both")
    p.set_defaults(func=_cmd_gen_data)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
