"""Run all four arms on the bundled desk sample and print the comparison table.

    python scripts/run_desk_experiment.py [--out desk_run] [--seed 0] [--C 1.0]

Set RSTIDS_KDD_TRAIN / RSTIDS_KDD_TEST to run on real KDD files instead; with
--train-total / --test-total they are stratified down first.
"""

from __future__ import annotations

import argparse
import os
import time

from rstids.pipeline import ARMS, ExperimentConfig, run_experiment


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="desk_run")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--C", type=float, default=1.0)
    ap.add_argument("--gamma", type=float, default=0.0)
    ap.add_argument("--bins", type=int, default=10)
    ap.add_argument("--train-total", type=int, default=0)
    ap.add_argument("--test-total", type=int, default=0)
    args = ap.parse_args()

    cfg = ExperimentConfig(
        train_path=os.environ.get("RSTIDS_KDD_TRAIN", "desk"),
        test_path=os.environ.get("RSTIDS_KDD_TEST", "desk"),
        output_dir=args.out, seed=args.seed, C=args.C, gamma=args.gamma, bins=args.bins,
        train_total=args.train_total, test_total=args.test_total, arms=ARMS,
    )
    t0 = time.perf_counter()
    bundle = run_experiment(cfg)
    print(bundle.comparison, end="")
    for arm, res in bundle.arms.items():
        detail = res.error or f"{len(res.mask)} features, {res.model.n_support} SVs"
        print(f"  {arm:<10} {detail}")
    print(f"{time.perf_counter() - t0:.1f}s, bundle in {cfg.output_dir}")


if __name__ == "__main__":
    main()
