"""Monte-Carlo benchmark harness: paired CVNN/RVNN trials and sweeps.

Protocol per trial: draw a fresh dataset from the configured class
parameters, split it 80/20, train the complex model on it and the
real-valued equivalent model on the identical realized split (cartesian or
polar encoding), and record final-epoch test accuracy.  Trials are
aggregated into median / mean / IQR / full-range statistics with the
median error 1.57*IQR/sqrt(n).

All randomness descends from ``master_seed``: trial t uses
``SeedSequence([master_seed, t])`` spawned into (data, cvnn init, rvnn
init, cvnn shuffle+dropout, rvnn shuffle+dropout) child streams, so any
trial's result is independent of how many trials run and of execution
order.  Accuracies are reported in percent.
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import datagen, nn

__all__ = [
    "ExperimentConfig",
    "SummaryStats",
    "BoxStats",
    "ModelRunRecord",
    "TrialResult",
    "RunSummary",
    "SweepPoint",
    "equivalent_rvnn",
    "realify",
    "polar_transform",
    "summarize",
    "box_stats",
    "class_params",
    "cvnn_model_spec",
    "run_single_trial",
    "run_monte_carlo",
    "sweep_correlation",
    "overfit_study",
    "write_trials_csv",
    "write_epochs_csv",
    "write_summary_csv",
    "write_box_csv",
]


@dataclass(frozen=True)
class ExperimentConfig:
    """Benchmark configuration; defaults follow the reference protocol."""

    preset: str = "A"  # 'A' | 'B' | 'C' | 'sweep'
    rho: float = 0.3  # class correlation used when preset == 'sweep'
    n_per_class: int = 10000
    feature_len: int = 128
    architecture: str = "2HL"  # '1HL' | '2HL'
    dropout_rate: float = 0.5
    trials: int = 30
    epochs: int = 300
    batch_size: int = 100
    learning_rate: float = 0.01
    train_fraction: float = 0.8
    rvnn_input: str = "cartesian"  # 'cartesian' | 'polar'
    master_seed: int = 0

    def __post_init__(self):
        if self.preset not in ("A", "B", "C", "sweep"):
            raise ValueError(f"unknown preset {self.preset!r}")
        if self.preset == "sweep" and not 0.0 <= abs(self.rho) < 1.0:
            raise ValueError(f"sweep rho must satisfy |rho| < 1, got {self.rho}")
        if self.architecture not in nn.HIDDEN_PRESETS:
            raise ValueError(f"unknown architecture {self.architecture!r}")
        if self.rvnn_input not in ("cartesian", "polar"):
            raise ValueError(f"rvnn_input must be cartesian or polar, got {self.rvnn_input!r}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.n_per_class < 1:
            raise ValueError(f"n_per_class must be >= 1, got {self.n_per_class}")
        if self.feature_len < 1:
            raise ValueError(f"feature_len must be >= 1, got {self.feature_len}")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError(f"dropout must lie in [0, 1), got {self.dropout_rate}")
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must lie in (0, 1), got {self.train_fraction}")

    @property
    def train_config(self) -> nn.TrainConfig:
        return nn.TrainConfig(
            epochs=self.epochs,
            batch_size=self.batch_size,
            learning_rate=self.learning_rate,
        )

    @property
    def rvnn_label(self) -> str:
        return "rvnn" if self.rvnn_input == "cartesian" else "rvnn_polar"


def class_params(config: ExperimentConfig) -> tuple[datagen.CircularityParams, ...]:
    if config.preset == "sweep":
        return datagen.sweep_pair(config.rho)
    return datagen.preset_classes(config.preset)


def cvnn_model_spec(config: ExperimentConfig, seed: int = 0) -> nn.ModelSpec:
    return nn.mlp_spec(
        "complex",
        config.feature_len,
        nn.HIDDEN_PRESETS[config.architecture],
        n_classes=len(class_params(config)),
        dropout_rate=config.dropout_rate,
        seed=seed,
    )


def equivalent_rvnn(cvnn_spec: nn.ModelSpec) -> nn.ModelSpec:
    """Real twin: input and hidden widths doubled, output width kept."""
    if not cvnn_spec.is_complex:
        raise ValueError("equivalent_rvnn expects a complex-field spec")
    layers = []
    for i, ls in enumerate(cvnn_spec.layers):
        last = i == len(cvnn_spec.layers) - 1
        layers.append(
            replace(
                ls,
                input_size=2 * ls.input_size,
                output_size=ls.output_size if last else 2 * ls.output_size,
            )
        )
    return nn.ModelSpec(field_kind="real", layers=tuple(layers), seed=cvnn_spec.seed)


def realify(dataset: datagen.LabeledDataset) -> datagen.LabeledDataset:
    """z -> (x, y): columns (re_0..re_{m-1}, im_0..im_{m-1}), labels shared."""
    f = dataset.features
    if not np.iscomplexobj(f):
        raise ValueError("realify expects a complex dataset")
    return datagen.LabeledDataset(
        features=np.hstack([f.real, f.imag]), labels=dataset.labels
    )


def polar_transform(dataset: datagen.LabeledDataset) -> datagen.LabeledDataset:
    """z -> (|z|, arg z) with arg in (-pi, pi] and arg(0) = 0."""
    f = dataset.features
    if not np.iscomplexobj(f):
        raise ValueError("polar_transform expects a complex dataset")
    return datagen.LabeledDataset(
        features=np.hstack([np.abs(f), np.angle(f)]), labels=dataset.labels
    )


# ---------------------------------------------------------------------------
# statistics


@dataclass(frozen=True)
class SummaryStats:
    """Order statistics of trial accuracies (percent).

    Quartiles use linear interpolation between order statistics
    (numpy's default percentile method); the median error is
    1.57*IQR/sqrt(n).
    """

    values: tuple[float, ...]
    median: float
    mean: float
    q1: float
    q3: float
    minimum: float
    maximum: float
    median_error: float
    mean_se: float

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def iqr(self) -> float:
        return self.q3 - self.q1


def summarize(accuracies) -> SummaryStats:
    values = np.asarray(accuracies, dtype=np.float64)
    if values.size == 0:
        raise ValueError("cannot summarize an empty accuracy array")
    q1, med, q3 = np.percentile(values, [25, 50, 75])
    n = values.size
    return SummaryStats(
        values=tuple(float(v) for v in values),
        median=float(med),
        mean=float(values.mean()),
        q1=float(q1),
        q3=float(q3),
        minimum=float(values.min()),
        maximum=float(values.max()),
        median_error=float(1.57 * (q3 - q1) / np.sqrt(n)),
        mean_se=float(values.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0,
    )


@dataclass(frozen=True)
class BoxStats:
    """Box-plot record: whiskers at 1.5*IQR, outliers beyond."""

    q1: float
    median: float
    q3: float
    lo_whisker: float
    hi_whisker: float
    outliers: tuple[float, ...]


def box_stats(accuracies) -> BoxStats:
    values = np.asarray(accuracies, dtype=np.float64)
    if values.size == 0:
        raise ValueError("cannot compute box statistics of an empty array")
    q1, med, q3 = np.percentile(values, [25, 50, 75])
    iqr = q3 - q1
    in_lo = values[values >= q1 - 1.5 * iqr]
    in_hi = values[values <= q3 + 1.5 * iqr]
    lo = float(in_lo.min())
    hi = float(in_hi.max())
    outliers = tuple(float(v) for v in np.sort(values[(values < lo) | (values > hi)]))
    return BoxStats(q1=float(q1), median=float(med), q3=float(q3), lo_whisker=lo, hi_whisker=hi, outliers=outliers)


# ---------------------------------------------------------------------------
# trials


@dataclass
class ModelRunRecord:
    final_train_loss: float
    final_train_accuracy: float
    final_test_loss: float
    final_test_accuracy: float
    history: nn.History


@dataclass
class TrialResult:
    trial: int
    cvnn: ModelRunRecord
    rvnn: ModelRunRecord


@dataclass
class RunSummary:
    """Per-model trial accuracies (percent) and their summary statistics."""

    config: ExperimentConfig
    cvnn: SummaryStats
    rvnn: SummaryStats
    trials: list[TrialResult] = field(default_factory=list)


def _seed_int(seed_seq: np.random.SeedSequence) -> int:
    return int(seed_seq.generate_state(1, np.uint64)[0])


def make_trial_data(config: ExperimentConfig, trial: int):
    """Fresh dataset + split for one trial, from the trial's data stream."""
    root = np.random.SeedSequence([config.master_seed, trial])
    children = root.spawn(5)
    rng = np.random.default_rng(children[0])
    ds = datagen.make_dataset(class_params(config), config.n_per_class, config.feature_len, rng)
    train, test = datagen.split(ds, config.train_fraction)
    seeds = {
        "cvnn_init": _seed_int(children[1]),
        "rvnn_init": _seed_int(children[2]),
        "cvnn_train": _seed_int(children[3]),
        "rvnn_train": _seed_int(children[4]),
    }
    return train, test, seeds


def _record(model_spec, train_set, test_set, train_cfg) -> ModelRunRecord:
    _, history = nn.train(model_spec, train_set, test_set, train_cfg)
    return ModelRunRecord(
        final_train_loss=history.train_loss[-1],
        final_train_accuracy=history.train_accuracy[-1],
        final_test_loss=history.test_loss[-1],
        final_test_accuracy=history.test_accuracy[-1],
        history=history,
    )


def run_single_trial(config: ExperimentConfig, trial: int) -> TrialResult:
    """Train the paired CVNN and RVNN on one fresh dataset realization."""
    train, test, seeds = make_trial_data(config, trial)
    base_cfg = config.train_config

    cspec = replace(cvnn_model_spec(config), seed=seeds["cvnn_init"])
    cvnn_rec = _record(
        cspec, train, test, replace(base_cfg, rng_seed=seeds["cvnn_train"])
    )

    rspec = replace(equivalent_rvnn(cspec), seed=seeds["rvnn_init"])
    encode = realify if config.rvnn_input == "cartesian" else polar_transform
    rvnn_rec = _record(
        rspec, encode(train), encode(test), replace(base_cfg, rng_seed=seeds["rvnn_train"])
    )
    return TrialResult(trial=trial, cvnn=cvnn_rec, rvnn=rvnn_rec)


def run_monte_carlo(config: ExperimentConfig, workers: int = 1) -> RunSummary:
    """All trials, aggregated; results do not depend on ``workers``."""
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_single_trial, [config] * config.trials, range(config.trials)))
    else:
        results = [run_single_trial(config, t) for t in range(config.trials)]
    results.sort(key=lambda r: r.trial)
    return RunSummary(
        config=config,
        cvnn=summarize([100.0 * r.cvnn.final_test_accuracy for r in results]),
        rvnn=summarize([100.0 * r.rvnn.final_test_accuracy for r in results]),
        trials=results,
    )


@dataclass
class SweepPoint:
    rho: float
    summary: RunSummary
    cvnn_box: BoxStats
    rvnn_box: BoxStats


def sweep_correlation(rhos, config: ExperimentConfig, workers: int = 1) -> list[SweepPoint]:
    """Monte-Carlo runs on preset-A-shaped classes (+rho, -rho) per rho."""
    points = []
    for rho in rhos:
        cfg = replace(config, preset="sweep", rho=float(rho))
        summary = run_monte_carlo(cfg, workers=workers)
        points.append(
            SweepPoint(
                rho=float(rho),
                summary=summary,
                cvnn_box=box_stats(summary.cvnn.values),
                rvnn_box=box_stats(summary.rvnn.values),
            )
        )
    return points


def overfit_study(config: ExperimentConfig, workers: int = 1) -> RunSummary:
    """The same protocol with dropout disabled (epoch curves retained)."""
    return run_monte_carlo(replace(config, dropout_rate=0.0), workers=workers)


# ---------------------------------------------------------------------------
# CSV emission (LF line endings, '.' decimal separator, repr round-trip floats)


def _fmt(x) -> str:
    return repr(float(x))


def write_trials_csv(summary: RunSummary, path) -> None:
    rvnn_label = summary.config.rvnn_label
    with open(path, "w", newline="\n") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(
            ["trial", "model", "final_train_acc", "final_test_acc", "final_train_loss", "final_test_loss"]
        )
        for r in summary.trials:
            for label, rec in (("cvnn", r.cvnn), (rvnn_label, r.rvnn)):
                w.writerow(
                    [
                        r.trial,
                        label,
                        _fmt(rec.final_train_accuracy),
                        _fmt(rec.final_test_accuracy),
                        _fmt(rec.final_train_loss),
                        _fmt(rec.final_test_loss),
                    ]
                )


def write_epochs_csv(summary: RunSummary, path) -> None:
    rvnn_label = summary.config.rvnn_label
    with open(path, "w", newline="\n") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["trial", "model", "epoch", "train_loss", "train_acc", "test_loss", "test_acc"])
        for r in summary.trials:
            for label, rec in (("cvnn", r.cvnn), (rvnn_label, r.rvnn)):
                h = rec.history
                for e in range(len(h.train_loss)):
                    w.writerow(
                        [
                            r.trial,
                            label,
                            e,
                            _fmt(h.train_loss[e]),
                            _fmt(h.train_accuracy[e]),
                            _fmt(h.test_loss[e]),
                            _fmt(h.test_accuracy[e]),
                        ]
                    )


def write_summary_csv(summary: RunSummary, path) -> None:
    with open(path, "w", newline="\n") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(
            ["model", "n_trials", "median", "median_error", "mean", "mean_se", "q1", "q3", "min", "max"]
        )
        for label, s in (("cvnn", summary.cvnn), (summary.config.rvnn_label, summary.rvnn)):
            w.writerow(
                [label, s.n]
                + [_fmt(v) for v in (s.median, s.median_error, s.mean, s.mean_se, s.q1, s.q3, s.minimum, s.maximum)]
            )


def write_box_csv(points: list[SweepPoint], path) -> None:
    """Box-plot rows; outlier values (if any) extend the row."""
    with open(path, "w", newline="\n") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["rho", "model", "q1", "median", "q3", "lo_whisker", "hi_whisker", "outliers"])
        for p in points:
            for label, b in (("cvnn", p.cvnn_box), (p.summary.config.rvnn_label, p.rvnn_box)):
                w.writerow(
                    [_fmt(p.rho), label]
                    + [_fmt(v) for v in (b.q1, b.median, b.q3, b.lo_whisker, b.hi_whisker)]
                    + [_fmt(o) for o in b.outliers]
                )
