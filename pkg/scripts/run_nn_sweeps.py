"""Margin against neighbourhood size on large ring lattices.

The base sweep uses analytic circulant spectra at n=1000; the by-cod and
by-gain variants cross the k axis with dispersion and coupling strength.
Pass --jacobi to cross-check the closed-form spectra against the dense
eigensolver on a smaller lattice (slow at n=1000, so the size drops).

  python scripts/run_nn_sweeps.py --out results/nn
"""

from __future__ import annotations

import argparse

from syncmargin.experiments import (
    ExperimentSpec,
    GridRange,
    default_spec,
    rebase_seeds,
    run_experiment,
)


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results/nn")
    ap.add_argument("--seed", type=int, default=None, help="rebase master seeds")
    ap.add_argument(
        "--jacobi", action="store_true",
        help="also run the base sweep at n=200 with both spectral routes",
    )
    args = ap.parse_args()

    for name in ("nn_margin_vs_k", "nn_margin_vs_k_by_cod", "nn_margin_vs_k_by_gain"):
        spec = default_spec(name)
        if args.seed is not None:
            spec = rebase_seeds(spec, args.seed)
        _, paths = run_experiment(spec, args.out)
        for p in paths:
            print("wrote", p)

    if args.jacobi:
        base = default_spec("nn_margin_vs_k")
        fixed = dict(base.fixed)
        fixed.update(n=200, spectra="both")
        spec = ExperimentSpec(
            base.name, {"k": GridRange(2, 98, 25)}, fixed, base.seeds
        )
        if args.seed is not None:
            spec = rebase_seeds(spec, args.seed)
        _, paths = run_experiment(spec, f"{args.out}/jacobi_check")
        for p in paths:
            print("wrote", p)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
