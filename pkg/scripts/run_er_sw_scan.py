"""Seed-averaged optimal gain for random vs small-world graphs across sizes.

Repeats the er_sw_optimal_gain sweep for several network sizes, keeping
the small-world base ring density proportional to n (the default base
half-neighbourhood 18 is calibrated for n=100). Each size gets its own
output directory so the CSV names do not collide.

  python scripts/run_er_sw_scan.py --sizes 80 100 120 140 --out results/er_sw
"""

from __future__ import annotations

import argparse

from syncmargin.experiments import ExperimentSpec, default_spec, rebase_seeds, run_experiment


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="*", default=[80, 100, 120, 140])
    ap.add_argument("--out", default="results/er_sw")
    ap.add_argument("--seed", type=int, default=None, help="rebase master seeds")
    args = ap.parse_args()

    base = default_spec("er_sw_optimal_gain")
    for n in args.sizes:
        fixed = dict(base.fixed)
        fixed["n"] = n
        fixed["sw_base_k"] = max(2, round(0.18 * n))
        spec = ExperimentSpec(base.name, base.grids, fixed, base.seeds)
        if args.seed is not None:
            spec = rebase_seeds(spec, args.seed)
        _, paths = run_experiment(spec, f"{args.out}/n{n:03d}")
        for p in paths:
            print("wrote", p)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
