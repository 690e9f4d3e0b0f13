"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the summary lines.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from liouville_lab import exponents as ex
from liouville_lab import radial_sim as rs
from liouville_lab import rayleigh as ry
from liouville_lab import thresholds as th
from liouville_lab import verifier as vf
from liouville_lab.polynomials import evaluate
from liouville_lab.precision import precision

GRID = 1 + np.geomspace(1.001 - 1, 1e3 - 1, 200)


def report(number: int, title: str, ok: bool, detail: str) -> None:
    print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})")
    assert ok, detail


def test_1_x0_above_five():
    start = time.perf_counter()
    margins = np.array([th.x0(p) - 5 for p in GRID])
    dims = np.array([th.dimension_threshold(p) for p in GRID])
    elapsed = time.perf_counter() - start
    ok = margins.min() > 1e-6 and dims.min() > 12 and elapsed < 5
    report(1, "x0 > 5 on 200 log-spaced p", ok,
           f"min margin {margins.min():.6g}, min threshold {dims.min():.6g}, {elapsed:.2f}s")


def test_2_improves_cowan_bound():
    gaps = np.array([th.dimension_threshold(p) - th.cowan_threshold(p) for p in GRID])
    d3, c3 = th.dimension_threshold(3), th.cowan_threshold(3)
    ok = gaps.min() > 0 and abs(d3 - 17.835) <= 1e-3 and abs(c3 - 15.995) <= 1e-3
    report(2, "dimension threshold above the Cowan threshold", ok,
           f"min gap {gaps.min():.6g}; p=3: {d3:.6f} vs {c3:.6f}")


def test_3_near_jl4():
    worst_order = math.inf
    worst_rel = 0.0
    for p in GRID:
        xz, xo = th.x0(p), th.x1(p)
        worst_order = min(worst_order, xo - xz)
        with precision("extended"):
            # x1 is double; evaluate H there exactly enough to expose only root error
            h = evaluate(ex.poly_H(p), xo)
        target = 2 * xo**2 - 1
        worst_rel = max(worst_rel, abs(float(h) - target) / abs(target))
    ok = worst_order > 0 and worst_rel <= 1e-6
    report(3, "x0 < x1 and H(x1) = 2 x1^2 - 1", ok,
           f"min x1-x0 {worst_order:.6g}, max rel residual {worst_rel:.3g}")


def test_4_identity_suite():
    ident = vf.verify_identities(GRID, tol=1e-9)
    eq_grid = 1 + np.geomspace(1e-3, 999, 50)
    equiv = vf.verify_equivalences(eq_grid, N_range=range(5, 31))
    beta = equiv.check("beta_range_iff_dimension_threshold")
    failed = [c.name for c in ident.checks + equiv.checks if not c.passed]
    ok = not failed and len(ident.checks) == 6 and beta.evaluations == 50 * 26
    worst = max(c.max_rel_residual for c in ident.checks)
    report(4, "identities at 1e-9 and equivalences on 50x26", ok,
           f"failed {failed}, worst identity residual {worst:.3g}, beta evaluations {beta.evaluations}")


def test_5_jl4_inversion():
    none12 = th.p_jl4(12) is None
    pj = th.p_jl4(13)
    residual = abs(th.singular_instability_margin(pj, 13)) if pj else math.inf
    arith = (3 * ex.Q4(-2, 13) == 1512 > ex.hardy_rellich_constant(13) == 855.5625
             and 3 * ex.Q4(-2, 20) == 5376 < ex.hardy_rellich_constant(20) == 6400)
    cls = (th.classify_singular_solution(3, 13) is th.SingularVerdict.UNSTABLE
           and th.classify_singular_solution(3, 20) is th.SingularVerdict.STABLE)
    ok = none12 and pj is not None and residual <= 1e-8 * 855.5625 and arith and cls
    report(5, "switching exponent and singular classification", ok,
           f"p_jl4(12)=None: {none12}; p_jl4(13)={pj}, residual {residual:.3g}")


def test_6_radial_corroboration():
    start = time.perf_counter()
    res = rs.shoot(3.0, 13)
    # the two bracket profiles agree up to trusted_radius; analyse only that part
    sol = res.solution.restrict(res.trusted_radius)
    slope = rs.tail_exponent(sol)
    K = rs.tail_amplitude(sol)
    soup = rs.souplet_check(sol)
    elapsed = time.perf_counter() - start
    amp_err = abs(K**2 - 504) / 504
    ok = (res.solution.event_radius > 100 and abs(slope + 2) <= 0.1 and amp_err <= 0.1
          and soup.max_violation <= 1e-6 * soup.max_v and soup.min_v > 0 and elapsed < 60)
    report(6, "radial shooting at p=3, N=13", ok,
           f"a*={res.a_star:.12g}, event radius {res.solution.event_radius:.4g}, "
           f"trusted {res.trusted_radius:.4g}, slope {slope:.5f}, K^2={K**2:.2f}, "
           f"Souplet {soup.max_violation:.3g}, min v {soup.min_v:.3g}, {elapsed:.1f}s")


def test_7_rayleigh():
    start = time.perf_counter()
    hr = ry.hardy_rellich_quotient(13, 6, 512)
    q = hr.min_quotient
    lower = q >= 855.5625 * (1 - 1e-6)
    close = q <= 1.1 * 855.5625
    agree = {N: ry.stability_consistency(3.0, N).agrees for N in (13, 19, 20)}
    elapsed = time.perf_counter() - start
    ok = lower and close and all(agree.values()) and elapsed < 120
    report(7, "Hardy-Rellich quotient and consistency", ok,
           f"q={q:.4f} over 6 decades with {hr.basis_size} functions, agreement {agree}, {elapsed:.1f}s")


def test_8_sweep_determinism():
    cmd = [sys.executable, "-m", "liouville_lab", "sweep", "--p-from", "1.001", "--p-to", "1000",
           "--steps", "100", "--log", "--jobs", "8", "--format", "csv"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    lines = a.count(b"\n")
    ok = a == b and lines == 101
    report(8, "parallel sweep is byte-identical", ok, f"{len(a)} bytes, {lines} lines")
