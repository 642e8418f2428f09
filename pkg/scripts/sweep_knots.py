"""Grid-refinement study: NRMSE of one target as the knot count grows.

Usage: python3 scripts/sweep_knots.py [--function sigmoid] [--seed 42]

The square system interpolates the samples, so the classical column sits
at machine precision for every size; the quantum column instead tracks
the optimizer's cost floor, which rises with the knot count because the
system's condition number grows with grid refinement.
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from qspline.functions import TARGETS
from qspline.pipeline import FitConfig, fit


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--function", default="sigmoid", choices=sorted(TARGETS))
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--knots", type=int, nargs="*", default=[4, 8, 16, 32])
    args = ap.parse_args()

    print(f"{'knots':>6} {'qubits':>7} {'nrmse':>12} {'classical':>12} "
          f"{'cost':>10} {'time':>8}")
    for k in args.knots:
        rep = fit(FitConfig(function=args.function, knots=k, seed=args.seed))
        print(f"{k:>6} {k.bit_length() - 1:>7} {rep.nrmse:>12.3e} "
              f"{rep.classical_nrmse:>12.2e} {rep.final_cost:>10.2e} "
              f"{rep.wall_seconds:>7.1f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
