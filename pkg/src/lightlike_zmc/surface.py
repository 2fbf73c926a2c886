"""Evaluation, residuals and causal type of the truncated surface t = f_N(x, y).

With ``a_0 = y`` and ``a_k = b_k / k`` for ``k >= 1`` the truncated surface is
``f_N = sum_{k<=N} a_k(y) x**k``.  All partial derivatives are obtained by
differentiating that sum term by term; finite differences are used only in
tests.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact_poly import CYPoly, YPoly, as_rational
from .recurrence import CoefficientTable, generate, source_P, source_Q, source_R

__all__ = [
    "TruncatedSolution",
    "CausalType",
    "ResidualDecomposition",
    "GridMesh",
    "truncate",
    "evaluate",
    "evaluate_exact",
    "partials",
    "partials_exact",
    "residual_numeric",
    "causal_quantity",
    "causal_type",
    "residual_symbolic",
    "build_mesh",
    "loglog_slope",
    "write_csv",
    "write_obj",
    "DEFAULT_CAUSAL_TOL",
]

DEFAULT_CAUSAL_TOL = 1e-9


def _pad(rows: Sequence[Sequence[float]]) -> np.ndarray:
    width = max((len(r) for r in rows), default=0) or 1
    out = np.zeros((len(rows), width))
    for k, r in enumerate(rows):
        out[k, : len(r)] = r
    return out


@dataclass(frozen=True, eq=False)
class TruncatedSolution:
    """The order-N truncation of the series at a fixed rational ``c > 0``.

    ``y_polys[k]`` is ``b_k`` with ``c`` substituted.  ``float_cache`` holds
    the y-coefficients of ``a_k``, ``a_k'`` and ``a_k''`` as dense float arrays
    of shape ``(N + 1, max_degree + 1)``.
    """

    c_value: Fraction
    order: int
    y_polys: tuple[YPoly, ...]
    float_cache: dict = field(repr=False)

    @property
    def c(self) -> float:
        return float(self.c_value)

    def series_coeffs(self) -> list[YPoly]:
        """Exact ``a_k(y)`` for k = 0..N."""
        return [self.y_polys[0]] + [
            p * Fraction(1, k) for k, p in enumerate(self.y_polys) if k >= 1
        ]


def truncate(table: CoefficientTable | None, c, order: int | None = None) -> TruncatedSolution:
    """Specialise ``table`` at ``c`` and keep b_0..b_order.

    ``table=None`` generates one of the requested order.
    """
    c_value = as_rational(c)
    if c_value <= 0:
        raise ValueError(f"c must be positive, got {c_value}")
    if table is None:
        table = generate(3 if order is None else max(order, 3))
    if order is None:
        order = table.order
    if not 3 <= order <= table.order:
        raise ValueError(f"order must lie in [3, {table.order}], got {order}")
    y_polys = tuple(table[k].specialize_c(c_value) for k in range(order + 1))

    a = [y_polys[0]] + [p * Fraction(1, k) for k, p in enumerate(y_polys) if k >= 1]
    da = [p.diff() for p in a]
    dda = [p.diff() for p in da]
    cache = {
        "a": _pad([p.to_floats() for p in a]),
        "da": _pad([p.to_floats() for p in da]),
        "dda": _pad([p.to_floats() for p in dda]),
    }
    for arr in cache.values():
        arr.setflags(write=False)
    return TruncatedSolution(c_value, order, y_polys, cache)


def _yvals(coeffs: np.ndarray, y) -> np.ndarray:
    # Horner in y for every k at once; result has shape (N + 1, *shape(y))
    return np.polynomial.polynomial.polyval(y, coeffs.T)


def _horner_x(vals: np.ndarray, x, shift: int = 0, weight=None):
    """sum_k w_k vals[k] x**(k - shift) over k >= shift."""
    acc = 0.0
    for k in range(vals.shape[0] - 1, shift - 1, -1):
        term = vals[k] if weight is None else weight(k) * vals[k]
        acc = acc * x + term
    return acc


def evaluate(sol: TruncatedSolution, x, y):
    """f_N(x, y); accepts scalars or broadcastable arrays."""
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    out = _horner_x(_yvals(sol.float_cache["a"], y), x)
    return float(out) if np.ndim(out) == 0 else out


def partials(sol: TruncatedSolution, x, y):
    """(f_x, f_y, f_xx, f_xy, f_yy) of the truncated series at (x, y)."""
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    a = _yvals(sol.float_cache["a"], y)
    da = _yvals(sol.float_cache["da"], y)
    dda = _yvals(sol.float_cache["dda"], y)
    fx = _horner_x(a, x, 1, lambda k: k)
    fy = _horner_x(da, x)
    fxx = _horner_x(a, x, 2, lambda k: k * (k - 1))
    fxy = _horner_x(da, x, 1, lambda k: k)
    fyy = _horner_x(dda, x)
    out = (fx, fy, fxx, fxy, fyy)
    if np.ndim(fx) == 0:
        return tuple(float(v) for v in out)
    return out


def _exact_horner(values: list, x: Fraction, shift: int = 0, weight=None) -> Fraction:
    acc = Fraction(0)
    for k in range(len(values) - 1, shift - 1, -1):
        term = values[k] if weight is None else weight(k) * values[k]
        acc = acc * x + term
    return acc


def evaluate_exact(sol: TruncatedSolution, x, y) -> Fraction:
    """f_N at rational (x, y), computed without rounding."""
    x, y = as_rational(x), as_rational(y)
    return _exact_horner([p(y) for p in sol.series_coeffs()], x)


def partials_exact(sol: TruncatedSolution, x, y) -> tuple[Fraction, ...]:
    x, y = as_rational(x), as_rational(y)
    a_polys = sol.series_coeffs()
    da_polys = [p.diff() for p in a_polys]
    a = [p(y) for p in a_polys]
    da = [p(y) for p in da_polys]
    dda = [p.diff()(y) for p in da_polys]
    return (
        _exact_horner(a, x, 1, lambda k: k),
        _exact_horner(da, x),
        _exact_horner(a, x, 2, lambda k: k * (k - 1)),
        _exact_horner(da, x, 1, lambda k: k),
        _exact_horner(dda, x),
    )


def _zmc_operator(fx, fy, fxx, fxy, fyy):
    return (1 - fy * fy) * fxx + 2 * fx * fy * fxy + (1 - fx * fx) * fyy


def residual_numeric(sol: TruncatedSolution, x, y, exact: bool = False):
    """(1 - f_y^2) f_xx + 2 f_x f_y f_xy + (1 - f_x^2) f_yy at (x, y).

    With ``exact=True`` the float inputs are converted to rationals and the
    whole expression is evaluated without rounding; only the final result is
    rounded.  Double precision bottoms out near 1e-20 here, far above the
    true residual for small |x|, so order-of-vanishing sweeps need this mode.
    """
    if exact:
        return float(_zmc_operator(*partials_exact(sol, x, y)))
    return _zmc_operator(*partials(sol, x, y))


def causal_quantity(sol: TruncatedSolution, x, y):
    """1 - f_x^2 - f_y^2: positive on the space-like side."""
    fx, fy, *_ = partials(sol, x, y)
    return 1 - fx * fx - fy * fy


class CausalType(str, enum.Enum):
    SPACELIKE = "S"
    TIMELIKE = "T"
    LIGHTLIKE = "L"


def causal_type(sol: TruncatedSolution, x: float, y: float, tol: float = DEFAULT_CAUSAL_TOL) -> CausalType:
    if not tol > 0:
        raise ValueError("tol must be positive")
    q = causal_quantity(sol, x, y)
    if q > tol:
        return CausalType.SPACELIKE
    if q < -tol:
        return CausalType.TIMELIKE
    return CausalType.LIGHTLIKE


def _classify_array(q: np.ndarray, tol: float) -> np.ndarray:
    labels = np.full(q.shape, CausalType.LIGHTLIKE.value, dtype="<U1")
    labels[q > tol] = CausalType.SPACELIKE.value
    labels[q < -tol] = CausalType.TIMELIKE.value
    return labels


# --- symbolic residual -----------------------------------------------------

Series = list  # list of CYPoly, index = power of x


def _series_mul(p: Series, q: Series, n: int) -> Series:
    out = [CYPoly.zero() for _ in range(n + 1)]
    for i, pi in enumerate(p[: n + 1]):
        if pi.is_zero():
            continue
        for j in range(0, n + 1 - i):
            if j < len(q) and not q[j].is_zero():
                out[i + j] = out[i + j] + pi * q[j]
    return out


def _series_lin(n: int, *pairs) -> Series:
    out = [CYPoly.zero() for _ in range(n + 1)]
    for w, s in pairs:
        for k in range(min(n + 1, len(s))):
            if not s[k].is_zero():
                out[k] = out[k] + s[k] * w
    return out


@dataclass
class ResidualDecomposition:
    """x-coefficient families (k = 0..N) of the pieces of f_yy = P~ + Q + R."""

    order: int
    Y_series: Series
    Ptilde_series: Series
    Q_series: Series
    R_series: Series
    fyy_series: Series
    residual_series: Series
    operator_series: Series
    ok: bool
    identity_ok: bool
    sources_ok: bool
    first_failure: tuple[int, CYPoly] | None = None

    def summary(self) -> str:
        if self.ok and self.identity_ok and self.sources_ok:
            return f"symbolic: orders 0..{self.order} all zero"
        if self.first_failure is not None:
            k, poly = self.first_failure
            return f"symbolic: x^{k} coefficient is nonzero: {poly}"
        return (
            f"symbolic: residual ok={self.ok}, decomposition identity ok="
            f"{self.identity_ok}, source terms ok={self.sources_ok}"
        )


def residual_symbolic(table: CoefficientTable) -> ResidualDecomposition:
    """Exact x-coefficients of f_yy - P~ - Q - R for the order-N truncation.

    Also recomputes the operator (1 - f_y^2) f_xx + 2 f_x f_y f_xy +
    (1 - f_x^2) f_yy directly and checks it coincides with the decomposed
    form coefficient by coefficient, and that the x^k coefficients of P~, Q, R
    are -P_k, -Q_k, R_k for 4 <= k <= N.
    """
    n = table.order
    b = table.coefficients
    a = [b[0]] + [b[k] * Fraction(1, k) for k in range(1, n + 1)]
    da = [p.diff_y() for p in a]
    zero = CYPoly.zero()

    fx = [a[k + 1] * (k + 1) for k in range(n)] + [zero]
    fxx = [a[k + 2] * ((k + 2) * (k + 1)) for k in range(n - 1)] + [zero, zero]
    fy = list(da)
    Y = [zero] + da[1:]
    fxy = [da[k + 1] * (k + 1) for k in range(n)] + [zero]
    fyy = [p.diff_y() for p in da]

    Y_fxx = _series_mul(Y, fxx, n)
    fx_fxy = _series_mul(fx, fxy, n)
    Ptilde = _series_lin(n, (2, Y_fxx), (-2, fx_fxy))
    Q = _series_lin(n, (1, _series_mul(Y, Y_fxx, n)), (-2, _series_mul(fx_fxy, Y, n)))
    R = _series_mul(_series_mul(fx, fx, n), fyy, n)
    resid = _series_lin(n, (1, fyy), (-1, Ptilde), (-1, Q), (-1, R))

    one = [CYPoly.one()] + [zero] * n
    fy2 = _series_mul(fy, fy, n)
    fx2 = _series_mul(fx, fx, n)
    op = _series_lin(
        n,
        (1, _series_mul(_series_lin(n, (1, one), (-1, fy2)), fxx, n)),
        (2, _series_mul(_series_mul(fx, fy, n), fxy, n)),
        (1, _series_mul(_series_lin(n, (1, one), (-1, fx2)), fyy, n)),
    )

    first = next(((k, p) for k, p in enumerate(resid) if not p.is_zero()), None)
    identity_ok = all(r == o for r, o in zip(resid, op))
    sources_ok = all(
        Ptilde[k] == -source_P(k, table)
        and Q[k] == -source_Q(k, table)
        and R[k] == source_R(k, table)
        for k in range(4, n + 1)
    )
    return ResidualDecomposition(
        order=n,
        Y_series=Y,
        Ptilde_series=Ptilde,
        Q_series=Q,
        R_series=R,
        fyy_series=fyy,
        residual_series=resid,
        operator_series=op,
        ok=first is None,
        identity_ok=identity_ok,
        sources_ok=sources_ok,
        first_failure=first,
    )


def loglog_slope(xs, values) -> float:
    """Least-squares slope of log|value| against log|x|."""
    lx = np.log(np.abs(np.asarray(xs, float)))
    lv = np.log(np.abs(np.asarray(values, float)))
    return float(np.polyfit(lx, lv, 1)[0])


# --- meshes ------------------------------------------------------------------


@dataclass
class GridMesh:
    """Uniform grid, arrays indexed ``[iy, ix]`` (row-major over y then x)."""

    x: np.ndarray
    y: np.ndarray
    t: np.ndarray
    causal: np.ndarray
    residual: np.ndarray
    certified: np.ndarray
    metadata: dict

    @property
    def shape(self) -> tuple[int, int]:
        return self.t.shape

    def rows(self):
        """(x, y, t, causal, residual, certified) per vertex in row-major order."""
        ny, nx = self.shape
        for iy in range(ny):
            for ix in range(nx):
                yield (
                    float(self.x[ix]),
                    float(self.y[iy]),
                    float(self.t[iy, ix]),
                    str(self.causal[iy, ix]),
                    float(self.residual[iy, ix]),
                    bool(self.certified[iy, ix]),
                )


def _grid(lo: float, hi: float, steps: int) -> np.ndarray:
    g = np.linspace(lo, hi, steps)
    # keep the light-like line on the grid when the range is symmetric
    if steps % 2 == 1 and math.isclose(lo, -hi):
        g[steps // 2] = 0.0
    return g


def build_mesh(
    sol: TruncatedSolution,
    x_range: tuple[float, float] = (-0.8, 0.8),
    y_range: tuple[float, float] = (-0.8, 0.8),
    steps: int | tuple[int, int] = 101,
    tol: float = DEFAULT_CAUSAL_TOL,
    certified_box: tuple[float, float] | None = None,
) -> GridMesh:
    """Sample value, causal label and residual on a uniform grid.

    ``certified_box = (x_radius, y_radius)`` marks the points inside the
    convergence rectangle; without it no point is marked.
    """
    nx, ny = (steps, steps) if isinstance(steps, int) else steps
    if nx < 2 or ny < 2:
        raise ValueError("steps must be >= 2")
    xs = _grid(*x_range, nx)
    ys = _grid(*y_range, ny)
    X, Y = np.meshgrid(xs, ys, indexing="xy")
    t = evaluate(sol, X, Y)
    fx, fy, fxx, fxy, fyy = partials(sol, X, Y)
    q = 1 - fx * fx - fy * fy
    resid = _zmc_operator(fx, fy, fxx, fxy, fyy)
    if certified_box is None:
        cert = np.zeros(X.shape, dtype=bool)
    else:
        rx, ry = certified_box
        cert = (np.abs(X) <= rx) & (np.abs(Y) <= ry)
    meta = {
        "c": str(sol.c_value),
        "order": sol.order,
        "x_range": [float(v) for v in x_range],
        "y_range": [float(v) for v in y_range],
        "steps": [nx, ny],
        "tol": tol,
        "max_abs_residual": float(np.max(np.abs(resid))),
        "certified_box": None if certified_box is None else [float(v) for v in certified_box],
        "certified_points": int(cert.sum()),
    }
    return GridMesh(xs, ys, t, _classify_array(q, tol), resid, cert, meta)


def write_csv(mesh: GridMesh, path, certified_column: bool = False) -> None:
    header = ["x", "y", "t", "causal", "residual"]
    if certified_column:
        header.append("certified")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for x, y, t, lab, res, cert in mesh.rows():
            row = [repr(x), repr(y), repr(t), lab, repr(res)]
            if certified_column:
                row.append(int(cert))
            w.writerow(row)


def write_obj(mesh: GridMesh, path) -> None:
    """Vertices (x, y, t) in row-major order and one quad per grid cell."""
    ny, nx = mesh.shape
    with open(path, "w") as fh:
        fh.write(f"# zero mean curvature surface, c={mesh.metadata['c']}, N={mesh.metadata['order']}\n")
        for x, y, t, *_ in mesh.rows():
            fh.write(f"v {x!r} {y!r} {t!r}\n")
        for iy in range(ny - 1):
            for ix in range(nx - 1):
                v00 = iy * nx + ix + 1  # OBJ indices are 1-based
                fh.write(f"f {v00} {v00 + 1} {v00 + nx + 1} {v00 + nx}\n")
