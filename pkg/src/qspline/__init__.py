"""Quantum-assisted B-spline fitting of activation functions.

The pipeline builds the bidiagonal degree-1 spline system for a target
function, solves it with a variational quantum linear solver over a dense
statevector simulation, reads estimates back through quantum inner products,
and scores them with normalized RMSE against an exact classical solve.
"""

__version__ = "0.1.0"

from .pipeline import FitConfig, fit  # noqa: E402
from .report import FitReport  # noqa: E402

__all__ = ["FitConfig", "FitReport", "fit", "__version__"]
