"""Fit all four activation targets and print the benchmark table.

Usage: python3 scripts/run_bench.py [--knots 16] [--seed 42] [--out results]
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from qspline import svg
from qspline.pipeline import QSPLINES_BASELINE, FitConfig, fit


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--knots", type=int, default=16)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()

    out_dir = pathlib.Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    print(f"{'function':<10} {'nrmse':>12} {'classical':>12} {'baseline':>10} {'time':>8}")
    for name in ("elu", "relu", "sigmoid", "sin"):
        rep = fit(FitConfig(function=name, knots=args.knots, seed=args.seed))
        (out_dir / f"{rep.stem()}.csv").write_text(rep.csv_text())
        (out_dir / f"{rep.stem()}.json").write_text(rep.json_text())
        svg.write_svg(rep, out_dir / f"{rep.stem()}.svg")
        base = QSPLINES_BASELINE[name]
        base_txt = f"{base:.4f}" if base is not None else "--"
        print(f"{name:<10} {rep.nrmse:>12.3e} {rep.classical_nrmse:>12.2e} "
              f"{base_txt:>10} {rep.wall_seconds:>7.1f}s")
    print(f"wrote per-function csv/json/svg under {out_dir}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
