#!/usr/bin/env python3
"""Full-protocol accuracy table: presets A/B/C x {1HL, 2HL}.

Runs the complete benchmark (30 trials, 300 epochs each) for all six
dataset/architecture combinations and prints the median/mean/IQR/range
table. Expect several hours of CPU time; pass --trials/--epochs to scale
down.
"""

import argparse

from cvnn_bench import experiments
from cvnn_bench.experiments import ExperimentConfig


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=30)
    ap.add_argument("--epochs", type=int, default=300)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    rows = []
    for preset in ("A", "B", "C"):
        for arch in ("1HL", "2HL"):
            cfg = ExperimentConfig(
                preset=preset,
                architecture=arch,
                trials=args.trials,
                epochs=args.epochs,
                master_seed=args.seed,
            )
            summary = experiments.run_monte_carlo(cfg, workers=args.workers)
            for label, s in (("cvnn", summary.cvnn), ("rvnn", summary.rvnn)):
                rows.append((preset, arch, label, s))
                print(
                    f"{preset} {arch} {label}: median {s.median:.2f} +/- {s.median_error:.2f}  "
                    f"mean {s.mean:.2f} +/- {s.mean_se:.2f}  "
                    f"IQR {s.q1:.2f}-{s.q3:.2f}  range {s.minimum:.2f}-{s.maximum:.2f}",
                    flush=True,
                )

    print("\ntest accuracy (%)")
    print(f"{'data':>6} {'arch':>5} {'model':>6} {'median':>8} {'mean':>8} {'IQR':>15} {'range':>15}")
    for preset, arch, label, s in rows:
        print(
            f"{preset:>6} {arch:>5} {label:>6} {s.median:8.2f} {s.mean:8.2f} "
            f"{s.q1:7.2f}-{s.q3:<7.2f} {s.minimum:7.2f}-{s.maximum:<7.2f}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
