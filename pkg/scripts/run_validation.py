"""Monte Carlo validation of the sufficient condition, full budget.

Runs the thirteen calibrated cases (ten feasible, three deliberately
off-condition) and prints one line per case. Exits nonzero if any
feasible case fails to decay or its noise floor is not linear in the
additive variance.

  python scripts/run_validation.py --out results/validation --threads 2
"""

from __future__ import annotations

import argparse

from syncmargin.cli import main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results/validation")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--runs", type=int, default=None)
    ap.add_argument("--horizon", type=int, default=None)
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args()

    argv = ["validate", "--out", args.out]
    for flag in ("seed", "runs", "horizon", "threads"):
        value = getattr(args, flag)
        if value is not None:
            argv += [f"--{flag}", str(value)]
    return cli_main(argv)


if __name__ == "__main__":
    raise SystemExit(main())
