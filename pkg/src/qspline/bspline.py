"""B-spline bases and the linear systems built from them.

Basis functions follow the classic two-term recursion with the 0/0 := 0
convention.  Supports are half-open ``[knot_i, knot_{i+1})`` except that the
very last interval also contains its right endpoint, so the partition of
unity extends to the final knot.

Two matrix constructions are provided: the general ``entries[k, i] =
B_i(points[k])`` collocation matrix for any degree, and the explicit
degree-1 form whose interior row k holds ``(1 - x_k, x_k)`` on the diagonal
and superdiagonal with unit rows at both ends.  The second is what the
quantum solver consumes; the first exists to cross-check it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "KnotVector",
    "DesignMatrix",
    "uniform_knots",
    "basis_value",
    "design_matrix_general",
    "design_matrix_d1",
    "hermitian_dilation",
]


@dataclass(frozen=True, eq=False)
class KnotVector:
    """Non-decreasing knot sequence with the degree it will be used at."""

    knots: np.ndarray
    degree: int

    def __post_init__(self):
        k = np.asarray(self.knots, dtype=float).reshape(-1)
        if self.degree < 0:
            raise ValueError("degree must be non-negative")
        if k.size < self.degree + 2:
            raise ValueError(
                f"need at least degree + 2 = {self.degree + 2} knots, got {k.size}"
            )
        if np.any(np.diff(k) < 0):
            raise ValueError("knots must be non-decreasing")
        k.flags.writeable = False
        object.__setattr__(self, "knots", k)

    @property
    def n_basis(self) -> int:
        """Number of basis functions: len(knots) - degree - 1."""
        return self.knots.size - self.degree - 1


def uniform_knots(n_basis: int, degree: int) -> KnotVector:
    """Uniformly spaced knots whose partition-of-unity window is exactly [0, 1].

    The sequence extends ``degree`` spacings past each end so that all
    ``n_basis`` functions are available on the whole unit interval; for
    degree 1 this puts the hat peaks on the uniform grid (k-1)/(K-1).
    """
    if n_basis <= degree:
        raise ValueError(f"need more than degree={degree} basis functions, got {n_basis}")
    h = 1.0 / (n_basis - degree)
    knots = (np.arange(n_basis + degree + 1) - degree) * h
    return KnotVector(knots=knots, degree=degree)


def _degree0(knots: np.ndarray, i: int, x: float) -> float:
    if knots[i] <= x < knots[i + 1]:
        return 1.0
    # close the final interval so values at the last knot are not lost
    if x == knots[-1] and knots[i] < knots[i + 1] == knots[-1]:
        return 1.0
    return 0.0


def basis_value(kv: KnotVector, i: int, x: float, degree: int | None = None) -> float:
    """Evaluate basis function ``i`` (0-based) at ``x`` via the recursion."""
    d = kv.degree if degree is None else degree
    if d < 0 or d > kv.degree:
        raise ValueError(f"degree must lie in [0, {kv.degree}], got {d}")
    n_funcs = kv.knots.size - d - 1
    if not 0 <= i < n_funcs:
        raise IndexError(f"basis index {i} out of range [0, {n_funcs})")
    return _cox_de_boor(kv.knots, i, d, float(x))


def _cox_de_boor(knots: np.ndarray, i: int, d: int, x: float) -> float:
    if d == 0:
        return _degree0(knots, i, x)
    value = 0.0
    left_den = knots[i + d] - knots[i]
    if left_den > 0:
        value += (x - knots[i]) / left_den * _cox_de_boor(knots, i, d - 1, x)
    right_den = knots[i + d + 1] - knots[i + 1]
    if right_den > 0:
        value += (knots[i + d + 1] - x) / right_den * _cox_de_boor(knots, i + 1, d - 1, x)
    return value


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    """Square collocation matrix together with how it was built."""

    entries: np.ndarray
    points: np.ndarray
    knots: KnotVector | None
    form: str  # "general" | "d1" | "dilated"

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"design matrix must be square, got {m.shape}")
        p = np.asarray(self.points, dtype=float).reshape(-1)
        if self.form not in ("general", "d1", "dilated"):
            raise ValueError(f"unknown form {self.form!r}")
        m.flags.writeable = False
        p.flags.writeable = False
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "points", p)

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]


def design_matrix_general(kv: KnotVector, points: Sequence[float]) -> DesignMatrix:
    """Collocation matrix ``entries[k, i] = B_i(points[k])`` for any degree.

    ``points`` must be non-decreasing and inside the knot range, and there
    must be exactly one point per basis function so the system is square.
    """
    pts = np.asarray(points, dtype=float).reshape(-1)
    if pts.size != kv.n_basis:
        raise ValueError(
            f"need {kv.n_basis} points for a square system, got {pts.size}"
        )
    if np.any(np.diff(pts) < 0):
        raise ValueError("evaluation points must be non-decreasing")
    if pts[0] < kv.knots[0] or pts[-1] > kv.knots[-1]:
        raise ValueError("evaluation points fall outside the knot range")
    entries = np.array(
        [[_cox_de_boor(kv.knots, i, kv.degree, x) for i in range(kv.n_basis)] for x in pts]
    )
    return DesignMatrix(entries=entries, points=pts, knots=kv, form="general")


def design_matrix_d1(points: Sequence[float]) -> DesignMatrix:
    """Explicit degree-1 system: unit boundary rows, interior rows (1-x_k, x_k).

    Interior values must lie strictly inside (0, 1); the first and last
    inputs do not appear in the matrix (their rows are unit rows), and the
    matrix is nonsingular exactly because every diagonal entry stays > 0.
    """
    pts = np.asarray(points, dtype=float).reshape(-1)
    K = pts.size
    if K < 2:
        raise ValueError(f"need at least two points, got {K}")
    if np.any(np.diff(pts) <= 0.0):
        raise ValueError("sample points must be strictly increasing")
    interior = pts[1:-1]
    if np.any((interior <= 0.0) | (interior >= 1.0)):
        raise ValueError("interior points must lie strictly inside (0, 1)")
    entries = np.zeros((K, K))
    entries[0, 0] = 1.0
    entries[K - 1, K - 1] = 1.0
    for k in range(1, K - 1):
        entries[k, k] = 1.0 - pts[k]
        entries[k, k + 1] = pts[k]
    return DesignMatrix(entries=entries, points=pts, knots=uniform_knots(K, 1), form="d1")


def hermitian_dilation(matrix: DesignMatrix | np.ndarray) -> DesignMatrix:
    """Embed S into the Hermitian block matrix [[0, S], [S^dag, 0]].

    Solving the dilated system against the padded target (Y, 0) recovers the
    original solution in the lower half of the state, at the price of one
    extra qubit.
    """
    if isinstance(matrix, DesignMatrix):
        s = matrix.entries
        points = matrix.points
        knots = matrix.knots
    else:
        s = np.asarray(matrix, dtype=float)
        points = np.array([])
        knots = None
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError(f"can only dilate a square matrix, got {s.shape}")
    k = s.shape[0]
    big = np.zeros((2 * k, 2 * k))
    big[:k, k:] = s
    big[k:, :k] = s.T
    return DesignMatrix(entries=big, points=points, knots=knots, form="dilated")
