"""Cylindrical hypersurfaces F(x_1, ..., x_n) = f(x_1, x_2) in R^{n+1}_1.

F has zero mean curvature because the n-dimensional operator, with all
derivatives in x_3..x_n identically zero, is exactly the surface operator.
:func:`residual_hyper` relies on that reduction and delegates to the surface
module; :func:`residual_hyper_full` evaluates the n-dimensional operator
term by term as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .surface import TruncatedSolution, evaluate, partials, residual_numeric

__all__ = [
    "HypersurfaceSlice",
    "evaluate_hyper",
    "gradient_hessian",
    "residual_hyper",
    "residual_hyper_full",
    "causal_quantity_hyper",
]


@dataclass(frozen=True)
class HypersurfaceSlice:
    base: TruncatedSolution
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"ambient dimension n must be >= 2, got {self.n}")

    def _split(self, point) -> tuple[float, float]:
        point = np.asarray(point, float)
        if point.shape != (self.n,):
            raise ValueError(f"expected a point with {self.n} components, got shape {point.shape}")
        return float(point[0]), float(point[1])


def evaluate_hyper(h: HypersurfaceSlice, point) -> float:
    x1, x2 = h._split(point)
    return evaluate(h.base, x1, x2)


def gradient_hessian(h: HypersurfaceSlice, point) -> tuple[np.ndarray, np.ndarray]:
    """Gradient (n,) and Hessian (n, n) of F; zero outside the (x_1, x_2) block."""
    x1, x2 = h._split(point)
    fx, fy, fxx, fxy, fyy = partials(h.base, x1, x2)
    grad = np.zeros(h.n)
    hess = np.zeros((h.n, h.n))
    grad[:2] = fx, fy
    hess[:2, :2] = [[fxx, fxy], [fxy, fyy]]
    return grad, hess


def residual_hyper(h: HypersurfaceSlice, point) -> float:
    """Zero-mean-curvature residual of F at ``point`` via the 2D reduction."""
    x1, x2 = h._split(point)
    return residual_numeric(h.base, x1, x2)


def residual_hyper_full(h: HypersurfaceSlice, point) -> float:
    """(1 - |grad F|^2) trace(Hess F) + grad F . Hess F . grad F, literally."""
    grad, hess = gradient_hessian(h, point)
    return float((1 - grad @ grad) * np.trace(hess) + grad @ hess @ grad)


def causal_quantity_hyper(h: HypersurfaceSlice, point) -> float:
    """1 - |grad F|^2."""
    grad, _ = gradient_hessian(h, point)
    return float(1 - grad @ grad)
