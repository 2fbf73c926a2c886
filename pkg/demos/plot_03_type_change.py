"""
The surface and its causal type
===============================

Graph of ``f`` for ``c = 1/2`` on ``|x|, |y| < 0.8``, coloured by causal type:
space-like for ``x < 0``, time-like for ``x > 0``, light-like on ``x = 0``.
The certified convergence strip is much narrower than the plotted range.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from lightlike_zmc.certify import compute_constants
from lightlike_zmc.surface import build_mesh, truncate

sol = truncate(None, "1/2", 20)
consts = compute_constants(0.5, 0.8)
mesh = build_mesh(sol, (-0.8, 0.8), (-0.8, 0.8), 101, certified_box=(1 / consts.C, 0.8))
print(f"certified |x| <= {1 / consts.C:.4f}; max |residual| on grid {mesh.metadata['max_abs_residual']:.2e}")

X, Y = np.meshgrid(mesh.x, mesh.y)
colour = np.where(mesh.causal == "S", 0.0, np.where(mesh.causal == "T", 1.0, 0.5))

fig = plt.figure(figsize=(10, 4.5))
ax = fig.add_subplot(1, 2, 1, projection="3d")
ax.plot_surface(X, Y, mesh.t, facecolors=plt.cm.coolwarm(colour), linewidth=0, antialiased=False)
ax.set_xlabel("x")
ax.set_ylabel("y")
ax.set_zlabel("t")

ax2 = fig.add_subplot(1, 2, 2)
q = ax2.contourf(X, Y, np.log10(np.abs(mesh.residual) + 1e-300), levels=20)
ax2.axvline(0, color="k", lw=0.5)
ax2.set_title("log10 |residual|")
fig.colorbar(q, ax=ax2)
fig.tight_layout()
fig.savefig("type_change.png", dpi=120)
