"""Statistics of Riemann zeta zeros: pair, twisted-pair and triple correlations,
and moments of log zeta on the critical line, with the matching predictions."""

from . import arithmetic, correlations, kernels, moments, predictions, zerodata, zetaeval
from ._backend import NAME as backend

__version__ = "0.1.0"

__all__ = [
    "arithmetic",
    "backend",
    "correlations",
    "kernels",
    "moments",
    "predictions",
    "zerodata",
    "zetaeval",
]
