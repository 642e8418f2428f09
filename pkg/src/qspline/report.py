"""Fit reports and their serialized forms.

The CSV schema is frozen: header ``x,y_target,y_estimate``, one row per
knot, every number printed with 12 significant digits.  Runs with the same
flags and seed must reproduce the file byte for byte, so nothing volatile
(timing, hostnames) belongs in it; the JSON sidecar carries the full
configuration and diagnostics instead.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

__all__ = ["FitReport", "format_number", "CSV_HEADER"]

CSV_HEADER = "x,y_target,y_estimate"


def format_number(value: float) -> str:
    """Decimal string with 12 significant digits."""
    return format(float(value), ".12g")


@dataclass
class FitReport:
    """Everything needed to inspect or replay one fit."""

    function: str
    knots: int
    degree: int
    mode: str  # "exact" | "shots" | "classical"
    shots: int | None
    ansatz: dict | None
    optimizer: dict | None
    seed: int | None
    rng: str | None
    domain: tuple[float, float]
    xs: list[float]
    y_target: list[float]
    y_estimate: list[float]
    nrmse: float
    classical_nrmse: float | None
    final_cost: float | None
    converged: bool
    restarts_used: int
    mean_bias: float
    dilated: bool = False
    wall_seconds: float = 0.0
    baseline: dict = field(default_factory=dict)

    def __post_init__(self):
        lengths = {len(self.xs), len(self.y_target), len(self.y_estimate)}
        if lengths != {self.knots}:
            raise ValueError(
                f"triples must all have length {self.knots}, got {sorted(lengths)}"
            )

    def triples(self) -> list[tuple[float, float, float]]:
        return list(zip(self.xs, self.y_target, self.y_estimate))

    def recomputed_nrmse(self) -> float:
        est = np.asarray(self.y_estimate)
        tgt = np.asarray(self.y_target)
        span = tgt.max() - tgt.min()
        return float(np.sqrt(np.mean((est - tgt) ** 2)) / span)

    def csv_text(self) -> str:
        lines = [CSV_HEADER]
        for x, y, y_hat in self.triples():
            lines.append(f"{format_number(x)},{format_number(y)},{format_number(y_hat)}")
        return "\n".join(lines) + "\n"

    def json_text(self) -> str:
        payload = asdict(self)
        payload["domain"] = list(self.domain)
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def stem(self) -> str:
        seed = "none" if self.seed is None else self.seed
        return f"fit_{self.function}_K{self.knots}_seed{seed}"
