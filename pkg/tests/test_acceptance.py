"""Exit criteria, one test per criterion.

Each test records a one-line verdict; ``conftest.py`` prints them at the end
of the run.
"""

import csv
import json
import time
from fractions import Fraction

import numpy as np
import pytest

from lightlike_zmc import certify as cert
from lightlike_zmc.cli import main
from lightlike_zmc.exact_poly import CYPoly
from lightlike_zmc.hypersurface import HypersurfaceSlice, residual_hyper
from lightlike_zmc.recurrence import compare_with_reference, generate
from lightlike_zmc.surface import (
    CausalType,
    causal_quantity,
    causal_type,
    loglog_slope,
    residual_numeric,
    residual_symbolic,
    truncate,
)

HALF = Fraction(1, 2)
RESULTS: dict[int, str] = {}


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = f"[{'PASS' if ok else 'FAIL'}] criterion {n:>2}: {detail}"
    assert ok, RESULTS[n]


def m(coeff, j, i):
    return CYPoly.monomial(coeff, j, i)


@pytest.fixture(scope="module")
def table20():
    return generate(20)


@pytest.fixture(scope="module")
def sol20(table20):
    return truncate(table20, HALF)


@pytest.fixture(scope="module")
def report(table20):
    return cert.certify(HALF, 0.8, 20, 50, 0, lemma_k_max=200, table=table20)


def test_01_coefficient_reproduction():
    start = time.perf_counter()
    t = generate(7)
    elapsed = time.perf_counter() - start
    exact = (
        t[3] == m(3, 1, 1)
        and t[4] == m(-4, 2, 3)
        and t[5] == m(9, 3, 5)
        and t[7] == m(70, 5, 9) + m(-14, 3, 3)
        and t[6] == m(-24, 4, 7)
    )
    b6 = next(r for r in compare_with_reference(t) if r["k"] == 6)
    flagged = not b6["match"] and not b6["reference_weight_ok"] and b6["generated_weight_ok"]
    record(1, exact and flagged and elapsed < 1.0,
           f"b3..b7 exact, b6 = -24c^4y^7 (quoted c^2 flagged: {flagged}), {elapsed:.3f}s")


def test_02_symbolic_residual():
    start = time.perf_counter()
    d = residual_symbolic(generate(20))
    elapsed = time.perf_counter() - start
    ok = d.ok and all(p.is_zero() for p in d.residual_series[:21]) and len(d.residual_series) == 21
    record(2, ok and d.identity_ok and elapsed < 60.0,
           f"x^0..x^20 of f_yy - P~ - Q - R all zero, {elapsed:.2f}s")


def test_03_numeric_residual_order(table20):
    start = time.perf_counter()
    sol = truncate(table20, HALF, 12)
    xs = np.logspace(-3, -1, 9)
    vals = [residual_numeric(sol, float(x), 0.1, exact=True) for x in xs]
    slope = loglog_slope(xs, vals)
    elapsed = time.perf_counter() - start
    record(3, slope >= 12 - 0.5 and elapsed < 1.0, f"log-log slope {slope:.3f} >= 11.5, {elapsed:.3f}s")


def test_04_type_change(sol20):
    sides = (causal_type(sol20, -0.1, 0.1) is CausalType.SPACELIKE
             and causal_type(sol20, 0.1, 0.1) is CausalType.TIMELIKE)
    column = all(causal_type(sol20, 0.0, y) is CausalType.LIGHTLIKE for y in np.linspace(-0.8, 0.8, 33))
    flips = all(
        causal_quantity(sol20, -0.1, y) > 0 > causal_quantity(sol20, 0.1, y)
        for y in (-0.2, -0.1, -0.05, 0.05, 0.1, 0.2)
    )
    record(4, sides and column and flips, f"S at (-0.1,0.1), T at (0.1,0.1): {sides}; x=0 all L: {column}; flips: {flips}")


def test_05_tau():
    tau = cert.compute_tau()
    ts = np.random.default_rng(0).uniform(1e-6, 0.5, 100_000)
    g = 2 * (1 - 2 * ts) / (1 - ts) + 4 * ts * np.log((1 - ts) / ts)
    ok = abs(tau - 2.6906) <= 5e-4 and bool(np.all(g <= tau))
    record(5, ok, f"tau = {tau:.6f} (|tau - 2.6906| = {abs(tau - 2.6906):.1e} <= 5e-4), g <= tau on 1e5 samples")


def test_06_constants(report):
    c, d, tau = report.c, report.delta, report.tau
    M = 3 * max(144 * c * tau * d**1.5, (192 * c * c * tau) ** 0.25)
    rel = lambda a, b: abs(a - b) / abs(b)  # noqa: E731
    ok = (
        abs(report.M - 415.8) <= 1
        and rel(report.M, M) <= 1e-9
        and rel(report.C, d * report.M) <= 1e-9
        and rel(report.theta0, 3 / c * (d * report.M) ** 3) <= 1e-9
    )
    record(6, ok, f"M = {report.M:.3f}, C = {report.C:.3f}, theta0 = {report.theta0:.4e}")


def test_07_inductive_bounds(report):
    ys = np.asarray(report.y_samples)
    samples_ok = len(ys) == 50 and np.all(ys != 0) and np.all(np.abs(ys) <= 0.8)
    prop = report.per_k_results
    est = report.estimation_results
    ok = (
        samples_ok
        and [r["l"] for r in prop] == list(range(3, 21))
        and [r["k"] for r in est] == list(range(4, 21))
        and all(r["passed"] for r in prop)
        and all(r["passed"] for r in est)
    )
    n_viol = sum(len(c["violations"]) for r in prop + est for c in r["checks"].values())
    record(7, ok and n_viol == 0, f"3<=l<=20 bounds and 4<=k<=20 targets at 50 samples, {n_viol} violations")


def test_08_lemmas():
    start = time.perf_counter()
    tau = cert.compute_tau()
    a = cert.sweep_lemma_sum_int(200)
    b = cert.sweep_lemma_sum_2(tau, 200)
    q = cert.integral_quadrature_check(50, seed=0, rtol=1e-8)
    elapsed = time.perf_counter() - start
    expected_cases = sum(k - 3 for k in range(4, 201))
    ok = a["passed"] and a["cases"] == expected_cases and b["passed"] and b["cases"] == 194 and q["passed"]
    record(8, ok and elapsed < 30.0,
           f"lemma sums over k<=200 ({a['cases']} + {b['cases']} cases), quadrature max rel err "
           f"{q['max_rel_err']:.1e}, {elapsed:.2f}s")


def test_09_uniform_bound(report):
    rows = report.uniform_results
    ok = [r["k"] for r in rows] == list(range(7, 21)) and all(r["passed"] for r in rows)
    worst = min(r["log10_ratio"] for r in rows)
    record(9, ok, f"|b_k| <= theta0 C^k for 7<=k<=20, min log10 margin {worst:.1f}, n0 = {report.n0_observed}")


def test_10_figure_mesh(tmp_path, capsys):
    out = tmp_path / "fig.csv"
    code = main(["mesh", "--c", "1/2", "--n", "20", "--xrange=-0.8:0.8", "--yrange=-0.8:0.8",
                 "--steps", "101", "--out", str(out)])
    capsys.readouterr()
    rows = list(csv.reader(out.open()))
    header, data = rows[0], rows[1:]
    x = np.array([float(r[0]) for r in data])
    y = np.array([float(r[1]) for r in data])
    t = np.array([float(r[2]) for r in data])
    lab = np.array([r[3] for r in data])
    on_line = x == 0
    away = (x != 0) & (y != 0)
    ok = (
        code == 0
        and header == ["x", "y", "t", "causal", "residual"]
        and len(data) == 101 * 101
        and on_line.sum() == 101
        and np.array_equal(t[on_line], y[on_line])
        and set(lab[on_line]) == {"L"}
        and set(lab[away & (x < 0)]) == {"S"}
        and set(lab[away & (x > 0)]) == {"T"}
    )
    meta = json.loads((tmp_path / "fig.csv.meta.json").read_text())
    record(10, ok, f"101x101 mesh, t = y on x = 0, S | L | T pattern; certified |x| <= {meta['certified_x_radius']:.4f}")


def test_11_cylindrical_hypersurface(sol20):
    rng = np.random.default_rng(2024)
    bit_equal = True
    worst = 0.0
    for n in (2, 3, 5):
        h = HypersurfaceSlice(sol20, n)
        for _ in range(50):
            p = np.concatenate([rng.uniform(-0.05, 0.05, 2), rng.uniform(-1, 1, n - 2)])
            r = residual_hyper(h, p)
            bit_equal &= r == residual_numeric(sol20, p[0], p[1])
            worst = max(worst, abs(r))
    record(11, bit_equal and worst <= 1e-10, f"n in {{2,3,5}}: bit-equal to 2D path, max |residual| {worst:.2e}")
