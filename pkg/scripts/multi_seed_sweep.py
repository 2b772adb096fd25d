"""Average baseline-relative throughput loss over several seeds.

Usage: python3 scripts/multi_seed_sweep.py scripts/sweep.cfg --seeds 1 2 3 4 5
"""
import argparse
import dataclasses
from pathlib import Path

import numpy as np

from radarlte.config import load_config
from radarlte.runner import default_workers, sweep_distances


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("config")
    ap.add_argument("--seeds", type=int, nargs="+", default=[1, 2, 3, 4, 5])
    ap.add_argument("--workers", type=int, default=default_workers())
    args = ap.parse_args()
    cfg = load_config(args.config)
    losses = []
    for seed in args.seeds:
        run = dataclasses.replace(cfg, seed=seed, output_dir=Path(cfg.output_dir) / f"seed{seed}")
        summary, _ = sweep_distances(run, workers=args.workers)
        losses.append([e.loss_fraction for e in summary.per_distance])
        print(f"seed {seed}: " + "  ".join(f"{e.distance_km:g} km {e.loss_fraction:.4f}" for e in summary.per_distance),
              flush=True)
    mean = np.mean(losses, axis=0)
    dists = sorted(cfg.radar_distances_km)
    print("mean:   " + "  ".join(f"{d:g} km {m:.4f}" for d, m in zip(dists, mean)))


if __name__ == "__main__":
    main()
