"""Feasibility surfaces of the mean-square synchronization condition.

Runs the three analytic sweeps (margin over a/lambda, delta/lambda, and
lambda/cod planes) and writes plot-ready CSVs plus run manifests.

  python scripts/run_margin_surfaces.py --out results/surfaces
"""

from __future__ import annotations

import argparse

from syncmargin.experiments import default_spec, rebase_seeds, run_experiment


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results/surfaces")
    ap.add_argument("--seed", type=int, default=None, help="rebase master seeds")
    args = ap.parse_args()

    for name in ("tunnel_a", "tunnel_delta", "tunnel_slice"):
        spec = default_spec(name)
        if args.seed is not None:
            spec = rebase_seeds(spec, args.seed)
        _, paths = run_experiment(spec, args.out)
        for p in paths:
            print("wrote", p)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
