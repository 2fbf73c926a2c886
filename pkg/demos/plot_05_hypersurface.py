"""
Cylindrical hypersurfaces
=========================

``F(x_1, ..., x_n) = f(x_1, x_2)`` solves the n-dimensional zero mean
curvature equation and changes type across the plane ``x_1 = 0``.
"""

import numpy as np

from lightlike_zmc.hypersurface import (
    HypersurfaceSlice,
    causal_quantity_hyper,
    residual_hyper,
    residual_hyper_full,
)
from lightlike_zmc.surface import truncate

sol = truncate(None, "1/2", 20)
h = HypersurfaceSlice(sol, 5)
rng = np.random.default_rng(0)
for _ in range(5):
    p = np.concatenate([rng.uniform(-0.05, 0.05, 2), rng.uniform(-1, 1, 3)])
    print(np.round(p, 3), f"{residual_hyper(h, p): .2e}  full operator {residual_hyper_full(h, p): .2e}")

for x1 in (-0.1, 0.1):
    print(f"x1 = {x1:+.1f}: 1 - |grad F|^2 = {causal_quantity_hyper(h, [x1, 0.1, 0, 0, 0]):+.3e}")
