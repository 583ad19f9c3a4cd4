"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` (the lines are collected in the
terminal summary) or ``python3 tests/test_acceptance.py``.
"""

import csv
import io
import math
import sys
import time

import mpmath
import numpy as np
import pytest

from ptmathieu import core
from ptmathieu.cli import main
from ptmathieu.core import BranchId
from ptmathieu.floquet import discriminant_value, monodromy_batch
from ptmathieu.hill import band_edges, hermitian_equivalence_check
from ptmathieu.tracer import estimate_curvature, solve_edge, trace_boundary

Z, QP, QM = BranchId.A0_ZERO, BranchId.A0_QUARTER_PLUS, BranchId.A0_QUARTER_MINUS
BETAS = (0.0, 0.5, 0.9)


def _report(acceptance, number, title, ok, detail):
    acceptance(number, title, ok, detail)
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})")
    assert ok, detail


def _ulps(x, ref, scale=None):
    # rounding error of a sum is relative to the sum of term magnitudes
    return abs(x - ref) / math.ulp(max(abs(ref) if scale is None else scale, 1e-300))


def test_criterion_1_formula_fidelity(acceptance):
    worst = 0.0
    with mpmath.workdps(40):
        for eps in np.linspace(0.0, 0.5, 10):
            for beta in np.linspace(0.0, 1.0, 5):
                e, b = mpmath.mpf(float(eps)), mpmath.mpf(float(beta))
                s = mpmath.sqrt(1 - b * b)
                quarter_scale = float(mpmath.mpf(1) / 4 + s * e + (1 - b * b) / 2 * e * e)
                refs = [
                    (core.boundary_a0(eps, beta), -2 * (1 - b * b) * e * e, None),
                    (core.boundary_quarter(eps, beta, 1), mpmath.mpf(1) / 4 + s * e - (1 - b * b) / 2 * e * e,
                     quarter_scale),
                    (core.boundary_quarter(eps, beta, -1), mpmath.mpf(1) / 4 - s * e - (1 - b * b) / 2 * e * e,
                     quarter_scale),
                    (core.curvature_kappa1(beta), 4 * (1 - b * b), None),
                    (core.curvature_kappa2(beta), 1 - b * b, None),
                ]
                for got, ref, scale in refs:
                    worst = max(worst, _ulps(got, float(ref), scale))
                worst = max(worst, _ulps(core.curvature_kappa2(beta), core.curvature_kappa1(beta) / 4))
    _report(acceptance, 1, "formula fidelity on 50-point grid", worst <= 4, f"max error {worst:.1f} ulp")


def test_criterion_2_free_floquet(acceptance):
    discriminant_value(0.3, 0.0, 0.0)  # load the compiled kernel
    t0 = time.perf_counter()
    errs = [abs(discriminant_value(a, 0.0, 0.0, 4096) - 2 * math.cos(2 * math.pi * math.sqrt(a))) for a in (0.05, 0.25, 1.0)]
    err_neg = abs(discriminant_value(-0.1, 0.0, 0.0, 4096) - 2 * math.cosh(2 * math.pi * math.sqrt(0.1)))
    elapsed = time.perf_counter() - t0
    ok = max(errs) <= 1e-8 and err_neg <= 1e-6 and elapsed < 1.0
    _report(acceptance, 2, "Floquet discriminant at eps = 0", ok,
            f"max err {max(errs):.2e}, a=-0.1 err {err_neg:.2e}, {elapsed:.3f} s")


def test_criterion_3_reality_unimodularity(acceptance):
    a, e, b = np.meshgrid(np.linspace(-0.1, 0.5, 61), np.linspace(0.0, 0.3, 31),
                          [0.0, 0.5, 0.9, 1.0, 1.1], indexing="ij")
    t0 = time.perf_counter()
    m, xs = monodromy_batch(a, e, b, 4096)
    elapsed = time.perf_counter() - t0
    det = m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]
    im = np.max(np.abs((m[..., 0, 0] + m[..., 1, 1]).imag))
    dd = np.max(np.abs(det - 1))
    ok = bool(np.all(np.isnan(xs))) and im <= 1e-8 and dd <= 1e-9 and elapsed < 30
    _report(acceptance, 3, "PT reality and unimodularity", ok,
            f"max|Im D| {im:.1e}, max|det-1| {dd:.1e}, {a.size} points in {elapsed:.1f} s")


def test_criterion_4_boundary_validation(acceptance):
    t0 = time.perf_counter()
    worst = {Z: 0.0, QP: 0.0, QM: 0.0}
    for branch in (Z, QP, QM):
        power = 4 if branch is Z else 3
        for beta in BETAS:
            curve = trace_boundary(branch, beta, 0.1, 11)
            for target in (0.02, 0.05, 0.1):
                k = int(np.argmin(np.abs(curve.eps - target)))
                eps, a = curve.samples[k]
                err = abs(a - core.boundary(branch, eps, beta))
                worst[branch] = max(worst[branch], err / (5 * eps**power))
    elapsed = time.perf_counter() - t0
    ok = max(worst.values()) <= 1.0 and elapsed < 60
    detail = ", ".join(f"{b.value} {v:.2f}" for b, v in worst.items())
    _report(acceptance, 4, "traced vs closed-form boundaries", ok,
            f"error / bound: {detail}; {elapsed:.1f} s")


def test_criterion_5_curvature(acceptance):
    worst, flat = 0.0, 0.0
    for beta in BETAS:
        for branch in (Z, QP, QM):
            rep = estimate_curvature(trace_boundary(branch, beta, 0.05, 11))
            worst = max(worst, rep.relative_error)
    for branch in (Z, QP, QM):
        flat = max(flat, estimate_curvature(trace_boundary(branch, 1.0, 0.05, 11)).kappa_numeric)
    ok = worst <= 0.02 and flat <= 0.02
    _report(acceptance, 5, "curvature reproduction", ok,
            f"max relative error {worst:.2e}, max kappa at beta=1 {flat:.1e}")


def test_criterion_6_cross_engine(acceptance):
    worst = 0.0
    for beta in BETAS:
        for eps in (0.05, 0.1, 0.2, 0.3):
            for nu, target in ((0.0, 2.0), (0.5, -2.0)):
                edges = band_edges(nu, eps, beta, 32, 4)
                for k in range(3):
                    others = [abs(edges[k] - x) for j, x in enumerate(edges) if j != k]
                    # stay clear of the neighbouring edge so the bracket holds one root
                    window = min(0.02, 0.45 * min(others))
                    a = solve_edge(eps, beta, edges[k], target, window, steps=8192)
                    worst = max(worst, abs(a - edges[k]))
    _report(acceptance, 6, "Hill vs Floquet band edges", worst <= 1e-6, f"max |a_hill - a_floquet| {worst:.1e}")


def test_criterion_7_hermitian_equivalence(acceptance):
    worst = max(hermitian_equivalence_check(e, b, N=16) for e in (0.1, 0.2, 0.4) for b in (0.3, 0.6, 0.9))
    _report(acceptance, 7, "Hermitian equivalence", worst <= 1e-10, f"max deviation {worst:.1e}")


def _perturb_curves(tmp_path, beta_arg):
    out = tmp_path / f"perturb-{beta_arg}.csv"
    assert main(["perturb", "--beta", beta_arg, "--out", str(out)]) == 0
    body = "\n".join(ln for ln in out.read_text().splitlines() if not ln.startswith("#"))
    curves = {}
    for row in csv.DictReader(io.StringIO(body)):
        key = (float(row["beta"]), row["branch"])
        curves.setdefault(key, ([], []))
        curves[key][0].append(float(row["eps"]))
        curves[key][1].append(float(row["a"]))
    return {k: (np.array(e), np.array(a)) for k, (e, a) in curves.items()}


def test_criterion_8_figures(acceptance, tmp_path):
    c = _perturb_curves(tmp_path, "0,0.5,0.9")
    flat = _perturb_curves(tmp_path, "1")
    eps = c[(0.0, "zero")][0]
    pos = eps > 0
    z = {b: c[(b, "zero")][1][pos] for b in BETAS}
    qp = {b: c[(b, "quarter+")][1][pos] for b in BETAS}
    qm = {b: c[(b, "quarter-")][1][pos] for b in BETAS}
    line0, line14 = flat[(1.0, "zero")][1][pos], flat[(1.0, "quarter+")][1][pos]
    checks = {
        "zero curve bends left less as beta grows": bool(np.all((z[0.0] < z[0.5]) & (z[0.5] < z[0.9]))),
        "opening shrinks by sqrt(1-beta^2)": all(
            np.allclose((qp[b] - qm[b]) / (qp[0.0] - qm[0.0]), math.sqrt(1 - b * b), rtol=1e-9) for b in BETAS
        ),
        "beta=0.9 between beta=0 and beta=1": bool(
            np.all((z[0.0] < z[0.9]) & (z[0.9] < line0))
            and np.all((line14 < qp[0.9]) & (qp[0.9] < qp[0.0]))
            and np.all((qm[0.0] < qm[0.9]) & (qm[0.9] < line14))
        ),
    }
    ok = all(checks.values()) and np.all(line0 == 0.0) and np.all(line14 == 0.25)
    failed = [k for k, v in checks.items() if not v]
    _report(acceptance, 8, "figure ordering and monotonicity", ok,
            "all checks hold" if not failed else "failed: " + "; ".join(failed))


def test_criterion_9_convergence_order(acceptance):
    windows = np.array([0.02, 0.04, 0.08])
    slopes = {}
    for branch in (Z, QP, QM):
        for beta in BETAS:
            devs = []
            for E in windows:
                curve = trace_boundary(branch, beta, E, 9)
                pert = np.array([core.boundary(branch, e, beta) for e in curve.eps])
                devs.append(np.max(np.abs(curve.a - pert)))
            slopes[(branch, beta)] = np.polyfit(np.log(windows), np.log(devs), 1)[0]
    zero = min(v for (br, _), v in slopes.items() if br is Z)
    quarter = min(v for (br, _), v in slopes.items() if br is not Z)
    ok = zero >= 3.5 and quarter >= 2.5
    _report(acceptance, 9, "perturbative convergence order", ok,
            f"min slope zero {zero:.2f}, quarter {quarter:.2f}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
