#!/usr/bin/env python3
"""Full-protocol ablation studies: no-dropout overfitting, polar inputs,
and the correlation-coefficient sweep.

Each study runs the paired CVNN/RVNN Monte-Carlo protocol; defaults match
the headline benchmark (30 trials, 300 epochs). Budget several hours per
study at full scale.
"""

import argparse
from dataclasses import replace

from cvnn_bench import experiments
from cvnn_bench.experiments import ExperimentConfig


def show(tag, summary):
    for label, s in (("cvnn", summary.cvnn), (summary.config.rvnn_label, summary.rvnn)):
        print(
            f"{tag} {label}: median {s.median:.2f} +/- {s.median_error:.2f} "
            f"mean {s.mean:.2f} range {s.minimum:.2f}-{s.maximum:.2f}",
            flush=True,
        )


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--study", choices=["overfit", "polar", "sweep", "all"], default="all")
    ap.add_argument("--trials", type=int, default=30)
    ap.add_argument("--epochs", type=int, default=300)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--rhos", default="0.2,0.3,0.4,0.5,0.6,0.7")
    args = ap.parse_args()

    base = ExperimentConfig(
        trials=args.trials, epochs=args.epochs, master_seed=args.seed
    )

    if args.study in ("overfit", "all"):
        with_dropout = experiments.run_monte_carlo(base, workers=args.workers)
        show("overfit/with-dropout", with_dropout)
        without = experiments.overfit_study(base, workers=args.workers)
        show("overfit/no-dropout", without)
        gap_with = with_dropout.cvnn.median - with_dropout.rvnn.median
        gap_without = without.cvnn.median - without.rvnn.median
        print(f"median CVNN-RVNN gap: {gap_with:.2f} with dropout, {gap_without:.2f} without")

    if args.study in ("polar", "all"):
        polar = experiments.run_monte_carlo(
            replace(base, rvnn_input="polar"), workers=args.workers
        )
        show("polar", polar)

    if args.study in ("sweep", "all"):
        rhos = [float(tok) for tok in args.rhos.split(",") if tok.strip()]
        sweep_cfg = replace(base, architecture="1HL")
        for point in experiments.sweep_correlation(rhos, sweep_cfg, workers=args.workers):
            show(f"sweep rho={point.rho:g}", point.summary)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
