"""
Checking the zero mean curvature equation
=========================================

Two checks: the x-coefficients of the residual vanish exactly up to the
truncation order, and the numeric residual near the light-like line decays
like ``|x|**(N+1)``.
"""

import numpy as np

from lightlike_zmc.recurrence import generate
from lightlike_zmc.surface import loglog_slope, residual_numeric, residual_symbolic, truncate

N = 20
table = generate(N)
decomp = residual_symbolic(table)
print(decomp.summary())
print("decomposition identity holds:", decomp.identity_ok)

###############################################################################
# Double precision cannot resolve residuals of size 1e-40, so the sweep uses
# exact rational evaluation (``exact=True``).

xs = np.logspace(-3, -1, 9)
for order in (7, 12, 20):
    sol = truncate(table, "1/2", order)
    vals = [residual_numeric(sol, float(x), 0.1, exact=True) for x in xs]
    print(f"N = {order:2d}: slope {loglog_slope(xs, vals):6.2f}")
