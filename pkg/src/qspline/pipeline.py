"""End-to-end fit: sample a target, solve the spline system, read out.

This is the glue the CLI calls.  The classical path interpolates exactly and
serves as the floor every quantum run is compared against; the quantum path
runs the variational solve and the inner-product readout, then reports both
error numbers side by side.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import oracle, readout, vqls
from .bspline import design_matrix_d1
from .functions import TARGETS, minmax_normalize, nrmse, sample_grid
from .report import FitReport

__all__ = ["FitConfig", "QSPLINES_BASELINE", "BASELINE_KNOTS", "build_system", "fit"]

# Published reference errors of the swap-test spline model at 20 knots,
# printed alongside benchmark output; the sine column was never reported.
QSPLINES_BASELINE = {"elu": 0.4874, "relu": 0.5240, "sigmoid": 0.1589, "sin": None}
BASELINE_KNOTS = 20

_ALLOWED_KNOTS = (2, 4, 8, 16, 32, 64)


@dataclass(frozen=True)
class FitConfig:
    """Everything a single fit run needs; plain data so reports can embed it."""

    function: str = "sigmoid"
    knots: int = 16
    degree: int = 1
    mode: str = "exact"  # "exact" | "shots" | "classical"
    shots: int = 10_000
    restarts: int = 5
    seed: int = 42
    ansatz: str = "tree"  # "tree" | "layered"
    layers: int | None = None
    optimizer: str = "gd"
    max_iter: int = 2000
    tol: float = 1e-9

    def __post_init__(self):
        if self.function not in TARGETS:
            raise ValueError(
                f"unknown function {self.function!r}; pick one of {sorted(TARGETS)}"
            )
        if self.knots not in _ALLOWED_KNOTS:
            raise ValueError(f"knots must be one of {_ALLOWED_KNOTS}, got {self.knots}")
        if self.degree != 1:
            raise ValueError("only degree-1 fits are supported")
        if self.mode not in ("exact", "shots", "classical"):
            raise ValueError(f"unknown mode {self.mode!r}")


def build_system(knots: int):
    """Design matrix plus the unit-interval sample grid it was built on."""
    grid = sample_grid(knots, (0.0, 1.0))
    return design_matrix_d1(grid), grid


def _target_data(config: FitConfig):
    target = TARGETS[config.function]
    xs = sample_grid(config.knots, target.domain)
    y01, value_range = minmax_normalize(target(xs))
    return target, xs, y01, value_range


def fit(config: FitConfig) -> FitReport:
    """Run one full fit and package the result."""
    if config.mode == "classical":
        return oracle.fit_classical(config.function, config.knots, config.degree)

    target, xs, y01, _ = _target_data(config)
    system, _ = build_system(config.knots)
    n_qubits = config.knots.bit_length() - 1

    solve_cfg = vqls.SolveConfig(
        mode=config.mode,
        shots=config.shots,
        optimizer=config.optimizer,
        max_iter=config.max_iter,
        tol=config.tol,
        restarts=config.restarts,
        seed=config.seed,
    )
    ansatz_cfg = vqls.AnsatzConfig(
        n_qubits=n_qubits, layers=config.layers, kind=config.ansatz
    )

    started = time.perf_counter()
    solution = vqls.solve(system, y01, solve_cfg, ansatz_cfg)
    y_unit = y01 / float(np.linalg.norm(y01))
    estimate = readout.recover_estimates(
        system,
        solution.beta_state,
        y_unit,
        mode=config.mode,
        shots=config.shots,
        # disjoint from the restart substreams (seed, 0..restarts-1)
        seed=int(np.random.SeedSequence((config.seed, 1 << 20)).generate_state(1)[0]),
    )
    wall = time.perf_counter() - started

    y_estimate = estimate.values * float(np.linalg.norm(y01))
    classical = oracle.fit_classical(config.function, config.knots, config.degree)

    return FitReport(
        function=config.function,
        knots=config.knots,
        degree=config.degree,
        mode=config.mode,
        shots=config.shots if config.mode == "shots" else None,
        ansatz={
            "kind": ansatz_cfg.kind,
            "n_qubits": ansatz_cfg.n_qubits,
            "layers": ansatz_cfg.resolved_layers if ansatz_cfg.kind == "layered" else None,
            "entangler": ansatz_cfg.entangler if ansatz_cfg.kind == "layered" else None,
            "n_params": ansatz_cfg.n_params,
        },
        optimizer={
            "name": solve_cfg.optimizer,
            "learning_rate": solve_cfg.learning_rate,
            "fd_step": solve_cfg.fd_step,
            "max_iter": solve_cfg.max_iter,
            "tol": solve_cfg.tol,
            "restarts": solve_cfg.restarts,
        },
        seed=config.seed,
        rng="numpy default_rng; restart i seeded by SeedSequence((seed, i))",
        domain=target.domain,
        xs=[float(x) for x in xs],
        y_target=[float(v) for v in y01],
        y_estimate=[float(v) for v in y_estimate],
        nrmse=float(nrmse(y_estimate, y01)),
        classical_nrmse=classical.nrmse,
        final_cost=solution.final_cost,
        converged=solution.converged,
        restarts_used=solution.restarts_used,
        mean_bias=float(np.mean(y_estimate - y01)),
        wall_seconds=wall,
        baseline={
            "model": "QSplines (swap test)",
            "knots": BASELINE_KNOTS,
            "nrmse": QSPLINES_BASELINE[config.function],
        },
    )
