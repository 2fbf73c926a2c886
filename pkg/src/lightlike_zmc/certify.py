"""Desk-scale convergence certificate for the coefficient family.

Computes the constants tau, M, C = delta*M and theta0 = (3/c)(delta*M)^3 and
checks, on concrete indices and sample points, every inequality the
convergence argument rests on:

* the inductive bounds on |b_l''|, |b_l'|, |b_l| (exponent l* = (l-1)/2 - 2),
* the per-k targets |k P_k|, |k Q_k|, |k R_k| <= (c/3)|y|^{k*} M^{k-3},
* the two summation lemmas comparing discrete sums with the integral
  of 1/(u^2 (a-u)^2),
* the uniform bound |b_k(y)| <= theta0 C^k.

Plain double precision with a small comparison slack; nothing here is
interval arithmetic.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .exact_poly import CYPoly, as_rational
from .recurrence import CoefficientTable, generate, source_P, source_Q, source_R

__all__ = [
    "CertificationReport",
    "integral_closed_form",
    "tau_function",
    "golden_section_max",
    "compute_tau",
    "compute_constants",
    "sample_y",
    "check_proposition_bounds",
    "check_origin_bounds",
    "check_estimation_targets",
    "check_lemma_sum_int",
    "check_lemma_sum_2",
    "sweep_lemma_sum_int",
    "sweep_lemma_sum_2",
    "check_uniform_bound",
    "integral_quadrature_check",
    "tail_bound",
    "certify",
    "LEMMA_SLACK",
    "TAU_MARGIN",
]

LEMMA_SLACK = 1e-9
TAU_MARGIN = 1e-6
# relative slack for the l = 3 rows, where bound and value coincide
EQUALITY_RTOL = 1e-12

_INV_PHI = (math.sqrt(5) - 1) / 2


def integral_closed_form(t: float, a: float) -> float:
    """Integral of 1/(u^2 (a-u)^2) over [t, a-t], for 0 < t < a/2."""
    if not (a > 0 and 0 < t < a / 2):
        raise ValueError(f"need a > 0 and 0 < t < a/2, got t={t}, a={a}")
    return 2 / a**3 * (a * (a - 2 * t) / (t * (a - t)) + 2 * math.log((a - t) / t))


def tau_function(t: float) -> float:
    """g(t) = t * integral over [t, 1-t] = 2(1-2t)/(1-t) + 4t log((1-t)/t)."""
    return 2 * (1 - 2 * t) / (1 - t) + 4 * t * math.log((1 - t) / t)


def golden_section_max(f, lo: float, hi: float, tol: float = 1e-12, max_iter: int = 500):
    """Maximise a unimodal ``f`` on [lo, hi]; returns (argmax, max)."""
    a, b = lo, hi
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = f(x1)
    t = x1 if f1 >= f2 else x2
    return t, max(f1, f2)


def compute_tau(bracket: tuple[float, float] = (1e-9, 0.5 - 1e-9), margin: float = TAU_MARGIN) -> float:
    """Sharp constant bounding g on (0, 1/2), plus ``margin``.

    g tends to 2 at both ends of the interval and has a single interior
    maximum near t = 0.14.
    """
    _, gmax = golden_section_max(tau_function, *bracket)
    return gmax + margin


@dataclass
class CertificationReport:
    c: float
    delta: float
    tau: float
    M: float
    C: float
    theta0: float
    order: int = 0
    seed: int = 0
    y_samples: list = field(default_factory=list)
    per_k_results: list = field(default_factory=list)
    origin_results: list = field(default_factory=list)
    estimation_results: list = field(default_factory=list)
    uniform_results: list = field(default_factory=list)
    n0_observed: int | None = None
    lemma_results: dict = field(default_factory=dict)
    quadrature_results: dict = field(default_factory=dict)

    @property
    def M_branches(self) -> tuple[float, float]:
        return _m_branches(self.c, self.delta, self.tau)

    @property
    def certified_x_radius(self) -> float:
        return 1 / self.C

    def section_passed(self) -> dict[str, bool]:
        out = {
            "proposition_bounds": all(r["passed"] for r in self.per_k_results),
            "origin_bounds": all(r["passed"] for r in self.origin_results),
            "estimation_targets": all(r["passed"] for r in self.estimation_results),
            "uniform_bound": all(r["passed"] for r in self.uniform_results),
        }
        for name, res in self.lemma_results.items():
            out[name] = bool(res["passed"])
        if self.quadrature_results:
            out["integral_quadrature"] = bool(self.quadrature_results["passed"])
        return out

    @property
    def passed(self) -> bool:
        return all(self.section_passed().values())

    def first_failure(self) -> str | None:
        for name, ok in self.section_passed().items():
            if ok:
                continue
            rows = {
                "proposition_bounds": self.per_k_results,
                "origin_bounds": self.origin_results,
                "estimation_targets": self.estimation_results,
                "uniform_bound": self.uniform_results,
            }.get(name)
            if rows is not None:
                bad = next(r for r in rows if not r["passed"])
                return f"{name}: {bad}"
            detail = self.lemma_results.get(name) or self.quadrature_results
            return f"{name}: {detail.get('first_failure')}"
        return None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["constants"] = {
            "c": self.c,
            "delta": self.delta,
            "tau": self.tau,
            "M": self.M,
            "M_branches": list(self.M_branches),
            "C": self.C,
            "theta0": self.theta0,
            "certified_x_radius": self.certified_x_radius,
        }
        for key in ("c", "delta", "tau", "M", "C", "theta0"):
            d.pop(key)
        d["summary"] = {"sections": self.section_passed(), "passed": self.passed}
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _m_branches(c: float, delta: float, tau: float) -> tuple[float, float]:
    return 144 * c * tau * abs(delta) ** 1.5, (192 * c * c * tau) ** 0.25


def compute_constants(c, delta: float, tau: float | None = None) -> CertificationReport:
    c = float(c)
    delta = float(delta)
    if not c > 0:
        raise ValueError(f"c must be positive, got {c}")
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if tau is None:
        tau = compute_tau()
    M = 3 * max(_m_branches(c, delta, tau))
    C = delta * M
    theta0 = 3 / c * C**3
    return CertificationReport(c=c, delta=delta, tau=tau, M=M, C=C, theta0=theta0)


def sample_y(delta: float, n: int = 50, seed: int = 0) -> np.ndarray:
    """``n`` sorted nonzero samples from [-delta, delta], endpoints included."""
    rng = np.random.default_rng(seed)
    inner = rng.uniform(-delta, delta, max(n - 2, 0))
    inner[inner == 0] = delta / 2
    return np.sort(np.concatenate([[-delta, delta], inner])[:n])


def _float_poly(p: CYPoly, c: Fraction) -> np.ndarray:
    coeffs = p.specialize_c(c).to_floats()
    return np.asarray(coeffs or [0.0])


def _eval(coeffs: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.polynomial.polynomial.polyval(y, coeffs)


def _lstar(l: int) -> float:
    return (l - 1) / 2 - 2


def _compare(values: np.ndarray, bounds: np.ndarray, allow_equality: bool):
    """Pass flags and relative margins 1 - |value|/bound."""
    values = np.abs(values)
    margin = 1 - values / bounds
    if allow_equality:
        ok = values <= bounds * (1 + EQUALITY_RTOL)
    else:
        ok = values < bounds
    return ok, margin


def check_proposition_bounds(
    table: CoefficientTable, c, delta: float, ys, M: float, order: int | None = None
) -> list[dict]:
    """Inductive bounds on b_l'', b_l', b_l for 3 <= l <= order at sample ys."""
    c_rat = as_rational(c)
    cf = float(c_rat)
    ys = np.asarray(ys, float)
    if np.any(ys == 0) or np.any(np.abs(ys) > delta):
        raise ValueError("samples must be nonzero and lie in [-delta, delta]")
    ay = np.abs(ys)
    order = table.order if order is None else order
    rows = []
    for l in range(3, order + 1):
        b, db, ddb = table.derivatives(l)
        ls = _lstar(l)
        scale = M ** (l - 3)
        bound2 = cf * ay**ls * scale
        bound1 = 3 * cf * ay ** (ls + 1) / (ls + 2) * scale
        bound0 = 3 * cf * ay ** (ls + 2) / (ls + 2) ** 2 * scale
        eq = l == 3
        checks = {}
        for name, poly, bound in (("b''", ddb, bound2), ("b'", db, bound1), ("b", b, bound0)):
            ok, margin = _compare(_eval(_float_poly(poly, c_rat), ys), bound, eq)
            bad = [float(v) for v in ys[~ok]]
            checks[name] = {
                "passed": bool(ok.all()),
                "worst_margin": float(margin.min()),
                "violations": bad,
            }
        rows.append(
            {
                "l": l,
                "l_star": ls,
                "passed": all(v["passed"] for v in checks.values()),
                "worst_margin": min(v["worst_margin"] for v in checks.values()),
                "checks": checks,
            }
        )
    return rows


def check_origin_bounds(table: CoefficientTable, c, M: float, order: int | None = None) -> list[dict]:
    """The b_l' and b_l bounds at y = 0 for l >= 4.

    The b'' bound is singular there for l = 4 (l* = -1/2) and is skipped; the
    other two have nonnegative exponents and read 0 <= 0.
    """
    c_rat = as_rational(c)
    cf = float(c_rat)
    order = table.order if order is None else order
    rows = []
    for l in range(4, order + 1):
        b, db, _ = table.derivatives(l)
        ls = _lstar(l)
        scale = M ** (l - 3)
        v1 = abs(float(db.specialize_c(c_rat)(Fraction(0))))
        v0 = abs(float(b.specialize_c(c_rat)(Fraction(0))))
        bound1 = 3 * cf * 0.0 ** (ls + 1) / (ls + 2) * scale
        bound0 = 3 * cf * 0.0 ** (ls + 2) / (ls + 2) ** 2 * scale
        rows.append({"l": l, "passed": v1 <= bound1 and v0 <= bound0, "b'": v1, "b": v0})
    return rows


def check_estimation_targets(
    table: CoefficientTable, c, delta: float, ys, M: float, order: int | None = None
) -> list[dict]:
    """|k P_k|, |k Q_k|, |k R_k| <= (c/3)|y|^{k*} M^{k-3} for 4 <= k <= order."""
    c_rat = as_rational(c)
    cf = float(c_rat)
    ys = np.asarray(ys, float)
    if np.any(ys == 0) or np.any(np.abs(ys) > delta):
        raise ValueError("samples must be nonzero and lie in [-delta, delta]")
    ay = np.abs(ys)
    order = table.order if order is None else order
    rows = []
    for k in range(4, order + 1):
        target = cf / 3 * ay ** _lstar(k) * M ** (k - 3)
        checks = {}
        for name, fn in (("P", source_P), ("Q", source_Q), ("R", source_R)):
            vals = k * _eval(_float_poly(fn(k, table), c_rat), ys)
            ok, margin = _compare(vals, target, allow_equality=False)
            checks[name] = {
                "passed": bool(ok.all()),
                "worst_margin": float(margin.min()),
                "max_abs": float(np.abs(vals).max()),
                "violations": [float(v) for v in ys[~ok]],
            }
        rows.append(
            {
                "k": k,
                "passed": all(v["passed"] for v in checks.values()),
                "worst_margin": min(v["worst_margin"] for v in checks.values()),
                "checks": checks,
            }
        )
    return rows


def check_lemma_sum_int(k: int, p: int, slack: float = LEMMA_SLACK) -> tuple[float, float, bool]:
    """Sum_{q=2}^{k-p-2} k^3/(q^2 (k-p-q)^2) against the integral with a = 1 - p/k."""
    if p < 0 or k < p + 4:
        raise ValueError(f"need p >= 0 and k >= p + 4, got k={k}, p={p}")
    lhs = math.fsum(k**3 / (q * q * (k - p - q) ** 2) for q in range(2, k - p - 1))
    rhs = integral_closed_form(1 / k, 1 - p / k)
    return lhs, rhs, lhs <= rhs + slack


def check_lemma_sum_2(k: int, tau: float, slack: float = LEMMA_SLACK) -> tuple[float, float, float, bool]:
    """Double sum over (p, q) against (6/k) * integral, and that against 6*tau."""
    if k < 7:
        raise ValueError(f"need k >= 7, got {k}")
    lhs = math.fsum(
        k * k / (p * p * q * q * (k - p - q) ** 2)
        for p in range(2, k - 4)
        for q in range(2, k - p - 1)
    )
    mid = 6 / k * integral_closed_form(1 / k, 1.0)
    bound = 6 * tau
    return lhs, mid, bound, lhs <= mid + slack and mid <= bound + slack


def sweep_lemma_sum_int(k_max: int = 200, slack: float = LEMMA_SLACK) -> dict:
    count = 0
    worst = math.inf
    first_failure = None
    for k in range(4, k_max + 1):
        for p in range(0, k - 3):
            lhs, rhs, ok = check_lemma_sum_int(k, p, slack)
            count += 1
            worst = min(worst, rhs - lhs)
            if not ok and first_failure is None:
                first_failure = {"k": k, "p": p, "lhs": lhs, "rhs": rhs}
    return {
        "k_range": [4, k_max],
        "cases": count,
        "min_gap": worst,
        "passed": first_failure is None,
        "first_failure": first_failure,
    }


def sweep_lemma_sum_2(tau: float, k_max: int = 200, slack: float = LEMMA_SLACK) -> dict:
    worst_lhs = math.inf
    worst_mid = math.inf
    first_failure = None
    for k in range(7, k_max + 1):
        lhs, mid, bound, ok = check_lemma_sum_2(k, tau, slack)
        worst_lhs = min(worst_lhs, mid - lhs)
        worst_mid = min(worst_mid, bound - mid)
        if not ok and first_failure is None:
            first_failure = {"k": k, "lhs": lhs, "mid": mid, "bound": bound}
    return {
        "k_range": [7, k_max],
        "cases": k_max - 6,
        "min_gap_sum_vs_integral": worst_lhs,
        "min_gap_integral_vs_6tau": worst_mid,
        "passed": first_failure is None,
        "first_failure": first_failure,
    }


def check_uniform_bound(
    table: CoefficientTable, c, ys, theta0: float, C: float, k_min: int = 7, order: int | None = None
) -> tuple[list[dict], int | None]:
    """|b_k(y)| <= theta0 C^k on the samples for k_min <= k <= order.

    Also returns the smallest n0 >= 3 from which the bound holds for every
    k up to ``order`` (None if it fails at ``order`` itself).
    """
    c_rat = as_rational(c)
    ys = np.asarray(ys, float)
    order = table.order if order is None else order
    holds = {}
    rows = []
    for k in range(3, order + 1):
        vals = np.abs(_eval(_float_poly(table[k], c_rat), ys))
        bound = theta0 * C**k
        ok = bool((vals <= bound).all())
        holds[k] = ok
        if k >= k_min:
            rows.append(
                {"k": k, "passed": ok, "max_abs_b": float(vals.max()), "bound": bound,
                 "log10_ratio": float(math.log10(bound / vals.max())) if vals.max() > 0 else None}
            )
    n0 = None
    for k in range(order, 2, -1):
        if not holds[k]:
            break
        n0 = k
    return rows, n0


def integral_quadrature_check(n: int = 50, seed: int = 0, rtol: float = 1e-8) -> dict:
    """Closed-form integral against adaptive quadrature at random (t, a)."""
    from scipy.integrate import quad

    rng = np.random.default_rng(seed)
    worst = 0.0
    first_failure = None
    for _ in range(n):
        a = float(rng.uniform(0.1, 2.0))
        t = float(rng.uniform(0.01, 0.49) * a)
        closed = integral_closed_form(t, a)
        num, _ = quad(lambda u: 1 / (u * u * (a - u) ** 2), t, a - t, epsabs=0, epsrel=1e-13, limit=200)
        err = abs(closed - num) / abs(num)
        worst = max(worst, err)
        if err > rtol and first_failure is None:
            first_failure = {"t": t, "a": a, "closed": closed, "quad": num}
    return {"cases": n, "max_rel_err": worst, "rtol": rtol, "passed": first_failure is None,
            "first_failure": first_failure}


def tail_bound(report: CertificationReport, x: float, order: int) -> float:
    """Bound on sum_{k>order} |b_k(y)| |x|^k / k from |b_k| <= theta0 C^k."""
    r = report.C * abs(x)
    if r >= 1:
        return math.inf
    return report.theta0 * r ** (order + 1) / ((order + 1) * (1 - r))


def certify(
    c="1/2",
    delta: float = 0.8,
    order: int = 20,
    y_samples: int = 50,
    seed: int = 0,
    lemma_k_max: int = 200,
    table: CoefficientTable | None = None,
) -> CertificationReport:
    """Run every check and collect the results in one report."""
    c_rat = as_rational(c)
    report = compute_constants(float(c_rat), delta)
    if table is None or table.order < order:
        table = generate(order)
    ys = sample_y(delta, y_samples, seed)
    report.order = order
    report.seed = seed
    report.y_samples = [float(v) for v in ys]
    report.per_k_results = check_proposition_bounds(table, c_rat, delta, ys, report.M, order)
    report.origin_results = check_origin_bounds(table, c_rat, report.M, order)
    report.estimation_results = check_estimation_targets(table, c_rat, delta, ys, report.M, order)
    report.uniform_results, report.n0_observed = check_uniform_bound(
        table, c_rat, ys, report.theta0, report.C, order=order
    )
    report.lemma_results = {
        "lemma_sum_int": sweep_lemma_sum_int(lemma_k_max),
        "lemma_sum_2": sweep_lemma_sum_2(report.tau, lemma_k_max),
    }
    report.quadrature_results = integral_quadrature_check(seed=seed)
    return report
