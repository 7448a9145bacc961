#!/usr/bin/env python3
"""Tail-ratio vs measurement count, perturbed signals.

Full-scale run of the signal-perturbation experiment: Gaussian ensembles at
d = 256, flat sparse signals perturbed by a dense Gaussian error vector
before measurement.  The plotted metric is the distance to the best 2n-term
approximation over the scaled 1-norm tail, one curve per sparsity level.
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from rompkit.bench import SweepConfig, aggregates_path, run_sweep


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=500)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out-dir", default="results")
    parser.add_argument("--algo", default="romp", choices=("romp", "omp", "both"))
    args = parser.parse_args()

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = str(out / "signal_noise.csv")
    svg_path = str(out / "signal_noise.svg")

    config = SweepConfig(
        dim=256,
        sparsities=(4, 8, 12, 16, 20),
        measurement_counts=tuple(range(32, 257, 32)),
        trials=args.trials,
        noise_target="signal",
        sigma=None,
        algorithms=("romp", "omp") if args.algo == "both" else (args.algo,),
        seed=args.seed,
        csv_path=csv_path,
        svg_path=svg_path,
    )
    report = run_sweep(config)
    print(f"{len(report.records)} trials -> {csv_path}, {aggregates_path(csv_path)}, {svg_path}")
    for cell in report.cells:
        ratio = "n/a" if cell.ratio_sig_mean is None else f"{cell.ratio_sig_mean:.3f}"
        print(
            f"{cell.algo} n={cell.sparsity:2d} N={cell.measurements:3d} "
            f"mean tail ratio={ratio} support_hit={cell.support_hit_mean:.3f} failures={cell.failures}"
        )


if __name__ == "__main__":
    main()
