"""Zero mean curvature surfaces in Lorentz-Minkowski 3-space that change
causal type across a light-like line, built from an exact power series."""

from .exact_poly import CYPoly, YPoly
from .recurrence import CoefficientTable, generate
from .surface import (
    CausalType,
    TruncatedSolution,
    build_mesh,
    causal_type,
    evaluate,
    partials,
    residual_numeric,
    residual_symbolic,
    truncate,
)
from .certify import CertificationReport, compute_constants, compute_tau
from .hypersurface import HypersurfaceSlice, evaluate_hyper, residual_hyper

__version__ = "0.1.0"

__all__ = [
    "CYPoly",
    "YPoly",
    "CoefficientTable",
    "generate",
    "CausalType",
    "TruncatedSolution",
    "build_mesh",
    "causal_type",
    "evaluate",
    "partials",
    "residual_numeric",
    "residual_symbolic",
    "truncate",
    "CertificationReport",
    "compute_constants",
    "compute_tau",
    "HypersurfaceSlice",
    "evaluate_hyper",
    "residual_hyper",
]
