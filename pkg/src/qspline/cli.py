"""Command-line interface: fit one function, run the benchmark table, or
inspect matrix decompositions.

Exit codes: 0 success, 1 bad arguments, 2 a fit that did not converge (the
best effort is still written), 3 file I/O failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import pipeline, svg
from .bspline import design_matrix_d1
from .decomp import decompose_block, pauli_decompose, reconstruct
from .functions import TARGETS, sample_grid
from .report import FitReport, format_number

__all__ = ["main", "entry", "build_parser"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_CONVERGED = 2
EXIT_IO = 3

BENCH_ORDER = ("elu", "relu", "sigmoid", "sin")


class UsageError(Exception):
    """Bad command line or config file; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="qspline", description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def add_common(p):
        p.add_argument("--seed", type=int, default=None,
                       help="run seed (default: QSPLINE_SEED env or 42)")
        p.add_argument("--out", default=None, help="output directory (default: .)")
        p.add_argument("--config", default=None,
                       help="flat key=value file; explicit flags win")

    fit = sub.add_parser("fit", help="fit one target function")
    fit.add_argument("--function", choices=sorted(TARGETS), default=None)
    fit.add_argument("--knots", type=int, default=None, help="K, power of two in 2..64")
    fit.add_argument("--degree", type=int, default=None, help="spline degree (only 1)")
    fit.add_argument("--mode", choices=("exact", "shots"), default=None)
    fit.add_argument("--shots", type=int, default=None)
    fit.add_argument("--restarts", type=int, default=None)
    fit.add_argument("--ansatz", choices=("tree", "layered"), default=None)
    fit.add_argument("--layers", type=int, default=None,
                     help="entangling blocks for the layered ansatz")
    fit.add_argument("--max-iter", type=int, default=None, dest="max_iter",
                     help="optimizer iteration cap (useful in shots mode)")
    fit.add_argument("--svg", action="store_const", const=True, default=None,
                     help="also write an SVG plot")
    fit.add_argument("--classical-only", action="store_const", const=True,
                     default=None, dest="classical_only",
                     help="skip the quantum solve; exact classical fit only")
    add_common(fit)

    bench = sub.add_parser("bench", help="run all four functions and print the table")
    bench.add_argument("--knots", type=int, default=None)
    bench.add_argument("--mode", choices=("exact", "shots"), default=None)
    bench.add_argument("--shots", type=int, default=None)
    bench.add_argument("--restarts", type=int, default=None)
    bench.add_argument("--ansatz", choices=("tree", "layered"), default=None)
    bench.add_argument("--layers", type=int, default=None)
    bench.add_argument("--max-iter", type=int, default=None, dest="max_iter")
    bench.add_argument("--svg", action="store_const", const=True, default=None)
    bench.add_argument("--classical-only", action="store_const", const=True,
                       default=None, dest="classical_only")
    add_common(bench)

    dec = sub.add_parser("decompose", help="print an LCU term list")
    dec.add_argument("--block", nargs=2, type=float, metavar=("A", "B"), default=None,
                     help="decompose the 2x2 block [[1-a,a],[0,1-b]]")
    dec.add_argument("--function", choices=sorted(TARGETS), default=None)
    dec.add_argument("--knots", type=int, default=None)
    add_common(dec)

    return parser


# ----------------------------------------------------------------------------
# option resolution: flag > config file > environment (seed only) > default
# ----------------------------------------------------------------------------

_DEFAULTS = {
    "function": None,
    "knots": 16,
    "degree": 1,
    "mode": "exact",
    "shots": 10_000,
    "restarts": 5,
    "ansatz": "tree",
    "layers": None,
    "max_iter": 2000,
    "svg": False,
    "classical_only": False,
    "seed": 42,
    "out": ".",
}

_BOOL_WORDS = {"1": True, "true": True, "yes": True, "0": False, "false": False, "no": False}


def _read_config(path: str) -> dict:
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            for lineno, raw in enumerate(handle, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
                key, _, value = line.partition("=")
                values[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    return values


def _coerce(key: str, raw: str):
    if key in ("knots", "degree", "shots", "restarts", "layers", "max_iter", "seed"):
        try:
            return int(raw)
        except ValueError as exc:
            raise UsageError(f"config value {key}={raw!r} is not an integer") from exc
    if key in ("svg", "classical_only"):
        try:
            return _BOOL_WORDS[raw.lower()]
        except KeyError as exc:
            raise UsageError(f"config value {key}={raw!r} is not a boolean") from exc
    return raw


def _resolve(args: argparse.Namespace) -> dict:
    config = _read_config(args.config) if args.config else {}
    unknown = set(config) - set(_DEFAULTS)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    settings = {}
    for key, default in _DEFAULTS.items():
        value = getattr(args, key, None)
        if value is None and key in config:
            value = _coerce(key, config[key])
        if value is None and key == "seed":
            env = os.environ.get("QSPLINE_SEED")
            if env is not None:
                try:
                    value = int(env)
                except ValueError as exc:
                    raise UsageError(f"QSPLINE_SEED={env!r} is not an integer") from exc
        if value is None:
            value = default
        settings[key] = value
    return settings


def _fit_config(settings: dict) -> pipeline.FitConfig:
    if settings["function"] is None:
        raise UsageError("--function is required (sigmoid, relu, elu, or sin)")
    mode = "classical" if settings["classical_only"] else settings["mode"]
    try:
        return pipeline.FitConfig(
            function=settings["function"],
            knots=settings["knots"],
            degree=settings["degree"],
            mode=mode,
            shots=settings["shots"],
            restarts=settings["restarts"],
            seed=settings["seed"],
            ansatz=settings["ansatz"],
            layers=settings["layers"],
            max_iter=settings["max_iter"],
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _write_outputs(rep: FitReport, out_dir: str, want_svg: bool) -> str:
    os.makedirs(out_dir, exist_ok=True)
    stem = os.path.join(out_dir, rep.stem())
    with open(stem + ".csv", "w", encoding="utf-8") as handle:
        handle.write(rep.csv_text())
    with open(stem + ".json", "w", encoding="utf-8") as handle:
        handle.write(rep.json_text())
    if want_svg:
        svg.write_svg(rep, stem + ".svg")
    return stem


# ----------------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------------

def cmd_fit(settings: dict) -> int:
    rep = pipeline.fit(_fit_config(settings))
    stem = _write_outputs(rep, settings["out"], settings["svg"])
    cost = "" if rep.final_cost is None else f"  cost {rep.final_cost:.3e}"
    print(f"{rep.function} K={rep.knots} mode={rep.mode}  NRMSE {rep.nrmse:.6e}{cost}")
    print(f"wrote {stem}.csv")
    if not rep.converged:
        print("warning: solve did not converge; best effort written", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def _table_row(model: str, knots, cells: list) -> str:
    rendered = ["--" if c is None else (c if isinstance(c, str) else f"{c:.4f}")
                for c in cells]
    return f"{model:<20} {str(knots):>5}  " + "  ".join(f"{c:>10}" for c in rendered)


def cmd_bench(settings: dict) -> int:
    reports: dict[str, FitReport | None] = {}
    failed = False
    for name in BENCH_ORDER:
        per = dict(settings, function=name)
        try:
            reports[name] = pipeline.fit(_fit_config(per))
        except (ValueError, ArithmeticError) as exc:
            print(f"{name}: fit failed: {exc}", file=sys.stderr)
            reports[name] = None
            failed = True

    try:
        for rep in reports.values():
            if rep is not None:
                _write_outputs(rep, settings["out"], settings["svg"])
    except OSError:
        raise

    def cell(rep):
        return math.nan if rep is None else rep.nrmse

    quantum_row = [cell(reports[n]) for n in BENCH_ORDER]
    classical_row = [
        math.nan if reports[n] is None
        else (reports[n].nrmse if reports[n].mode == "classical"
              else reports[n].classical_nrmse)
        for n in BENCH_ORDER
    ]
    baseline_row = [pipeline.QSPLINES_BASELINE[n] for n in BENCH_ORDER]

    header = _table_row("Model", "Knots", [n.capitalize() for n in BENCH_ORDER])
    print(header)
    print("-" * len(header))
    print(_table_row("QSplines (swap test)", pipeline.BASELINE_KNOTS, baseline_row))
    print(_table_row("Classical oracle", settings["knots"],
                     [f"{v:.2e}" if v == v else "nan" for v in classical_row]))
    if not settings["classical_only"]:
        print(_table_row("This model", settings["knots"],
                         [f"{v:.4f}" if v == v else "nan" for v in quantum_row]))

    os.makedirs(settings["out"], exist_ok=True)
    summary = os.path.join(
        settings["out"], f"bench_K{settings['knots']}_seed{settings['seed']}.csv"
    )
    with open(summary, "w", encoding="utf-8") as handle:
        handle.write("model,knots," + ",".join(BENCH_ORDER) + "\n")
        handle.write(
            f"qsplines,{pipeline.BASELINE_KNOTS},"
            + ",".join("" if v is None else format_number(v) for v in baseline_row)
            + "\n"
        )
        handle.write(
            f"classical,{settings['knots']},"
            + ",".join("nan" if v != v else format_number(v) for v in classical_row)
            + "\n"
        )
        if not settings["classical_only"]:
            handle.write(
                f"vqls,{settings['knots']},"
                + ",".join("nan" if v != v else format_number(v) for v in quantum_row)
                + "\n"
            )
    print(f"wrote {summary}")
    return EXIT_NOT_CONVERGED if failed else EXIT_OK


def cmd_decompose(settings: dict, block) -> int:
    if block is not None and settings["function"] is not None:
        raise UsageError("pass either --block A B or --function, not both")
    if block is not None:
        a, b = float(block[0]), float(block[1])
        try:
            decomposition = decompose_block(a, b)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        target = np.array([[1.0 - a, a], [0.0, 1.0 - b]])
    elif settings["function"] is not None:
        try:
            cfg = _fit_config(settings)
        except UsageError:
            raise
        grid = sample_grid(cfg.knots, (0.0, 1.0))
        matrix = design_matrix_d1(grid).entries
        decomposition = pauli_decompose(matrix)
        target = matrix
    else:
        raise UsageError("decompose needs --block A B or --function NAME --knots K")

    for term in decomposition.terms:
        print(f"{term.label:<16} {format_number(term.coefficient):>18}")
    error = float(np.max(np.abs(reconstruct(decomposition) - target)))
    print(f"terms: {len(decomposition.terms)}")
    print(f"max reconstruction error: {error:.3e}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        settings = _resolve(args)
        if args.command == "fit":
            return cmd_fit(settings)
        if args.command == "bench":
            return cmd_bench(settings)
        return cmd_decompose(settings, args.block)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(parser.format_usage().rstrip(), file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def entry() -> None:
    sys.exit(main())
