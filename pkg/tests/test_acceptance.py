"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines and timings.
"""

import cmath
import math
import time

import numpy as np
import pytest

import thetasep as ts
from thetasep import lemmas
from thetasep.asymptotics import table_row

RTOL_9_DIGITS = 5e-9


def announce(number, ok, detail):
    print(f"ACCEPTANCE CRITERION {number}: {'PASS' if ok else 'FAIL'} ({detail})")


def test_criterion_1_constants_reproduction():
    started = time.perf_counter()
    report = ts.verify_constants()
    elapsed = time.perf_counter() - started
    worst = min(report.margins, key=report.margins.get)
    ok = report.passed and elapsed < 5.0
    announce(1, ok, f"{len(report.margins)} constants, worst slack at {worst}, "
                    f"{elapsed:.2f}s")
    assert report.passed, f"constants out of tolerance: {report.margins}"
    assert elapsed < 5.0


def test_criterion_2_asymptotic_table():
    reference = {
        5: (0.27, 336.2, 1225.1), 6: (0.39, 164.5, 416.1), 7: (0.48, 115.2, 239.1),
        8: (0.54, 92.8, 169.8), 9: (0.59, 80.2, 134.4), 10: (0.63, 72.2, 113.4),
        15: (0.75, 55.3, 73.0), 20: (0.81, 49.5, 60.5), 25: (0.85, 46.5, 54.4),
        30: (0.87, 44.7, 50.9),
    }
    started = time.perf_counter()
    rows = {n: table_row(n).truncated() for n in reference}
    elapsed = time.perf_counter() - started
    ok = rows == reference and elapsed < 1.0
    announce(2, ok, f"10 rows under the truncation convention, {elapsed:.3f}s")
    assert rows == reference
    assert elapsed < 1.0


def test_criterion_3_k4_margin():
    report = lemmas.verify_lemma_k4()
    margin = report.margins["product_exceeds_tail"]
    ok = abs(margin - 0.0079055467) <= 1e-8
    announce("3 (k4 margin)", ok, f"margin {margin:.10f} vs 0.0079055467 +- 1e-8")
    assert ok


@pytest.mark.xfail(
    strict=True,
    reason="verify --lemma all cannot pass: the boundary-product floor check (lemma Q) "
           "asserts min |Q0| >= 1.206552620 on the boundary of the left half-disk of "
           "radius 0.6, but the minimum is ~1.0 on the segment arg(q) = pi/2 as "
           "|q| -> 0 and 1.1341008 on the arc at arg(q) = pi (full product "
           "|Q(-0.6)| = 1.1325547, confirmed by the pentagonal-number series); every "
           "other suite passes with positive margins")
def test_criterion_3_lemma_suite_all_pass():
    started = time.perf_counter()
    reports = ts.verify_all()
    elapsed = time.perf_counter() - started
    ok = all(r.passed for r in reports.values()) and elapsed < 60.0
    failed = [name for name, r in reports.items() if not r.passed]
    announce(3, ok, f"suites failing: {failed or 'none'}, {elapsed:.1f}s")
    assert elapsed < 60.0
    assert not failed, f"failing suites: {failed}"


def test_criterion_4_separation_grid():
    started = time.perf_counter()
    moduli = (0.1, 0.2, 0.3, 0.4, 0.5, 0.52, 0.54, 0.549, 0.55)
    arguments = (math.pi / 2, 3 * math.pi / 4, math.pi, 5 * math.pi / 4, 3 * math.pi / 2)
    failures = []
    for m in moduli:
        for a in arguments:
            q = ts.QParameter.from_polar(m, a)
            rep = ts.verify_separation(q, 6, residual_tol=1e-10)
            if not rep.strongly_separated:
                failures.append((m, a, "not separated"))
                continue
            for k in range(1, 7):
                if not isinstance(rep.counts[k], int) or rep.counts[k] != 1:
                    failures.append((m, a, f"count k={k}: {rep.counts[k]}"))
                rec = rep.records[k]
                if rec.residual >= 1e-9 or not rec.annulus_ok:
                    failures.append((m, a, f"record k={k}"))
    elapsed = time.perf_counter() - started
    ok = not failures and elapsed < 300.0
    announce(4, ok, f"45 base points x 6 annuli, {elapsed:.1f}s")
    assert not failures, failures[:5]
    assert elapsed < 300.0


def test_criterion_5_radius_06_counts():
    started = time.perf_counter()
    failures = []
    for arg in (math.pi / 2, 2 * math.pi / 3, 5 * math.pi / 6, math.pi):
        q = ts.QParameter.from_polar(0.6, arg)
        if ts.count_zeros_in_annulus(q, ts.Annulus(1.5, 3.5)) != 2:
            failures.append((arg, "middle"))
        if ts.count_zeros_in_annulus(q, ts.Annulus.for_index(1)) != 1:
            failures.append((arg, 1))
        for k in (4, 5, 6):
            if ts.count_zeros_in_annulus(q, ts.Annulus.for_index(k)) != 1:
                failures.append((arg, k))
    elapsed = time.perf_counter() - started
    ok = not failures and elapsed < 120.0
    announce(5, ok, f"4 arguments at |q| = 0.6, {elapsed:.1f}s")
    assert not failures, failures
    assert elapsed < 120.0


def test_criterion_6_oracle_equivalence():
    rng = np.random.default_rng(20260811)
    started = time.perf_counter()
    for _ in range(100):
        q = cmath.rect(rng.uniform(0.05, 0.6), rng.uniform(0.0, 2 * math.pi))
        z = cmath.rect(10.0 ** rng.uniform(-0.5, 3.0 * rng.uniform(0.2, 1.0)),
                       rng.uniform(0.0, 2 * math.pi))
        th = ts.eval_theta(q, z)
        g = ts.eval_G(q, z)
        star_s = ts.eval_theta_star(q, z, method="series")
        star_p = ts.eval_theta_star(q, z, method="product")
        float_slack = 1e-13 * (th.scale + g.scale + 1.0)
        assert abs(th.value - (star_s.value - g.value)) <= \
            th.tail_bound + g.tail_bound + star_s.tail_bound + float_slack
        assert abs(star_s.value - star_p.value) <= \
            star_s.tail_bound + star_p.tail_bound + float_slack
        inner = ts.eval_theta(q, q * z)
        ident_slack = th.tail_bound + abs(q * z) * inner.tail_bound \
            + 1e-13 * (th.scale + abs(q * z) * inner.scale + 1.0)
        assert abs(th.value - (1.0 + q * z * inner.value)) <= ident_slack
    elapsed = time.perf_counter() - started
    announce(6, True, f"100 random points, decomposition + factorization + "
                      f"functional identity, {elapsed:.1f}s")


def test_criterion_7_asymptotic_cross_check():
    started = time.perf_counter()
    row = table_row(9)
    q = ts.QParameter(complex(-row.tau, 0.0))
    record = ts.locate_zero(q, 9)
    elapsed = time.perf_counter() - started
    modulus = abs(record.location)
    ok = row.m <= modulus <= row.M and 80.2 <= modulus <= 134.4 and elapsed < 30.0
    announce(7, ok, f"|xi_9({-row.tau:.4f})| = {modulus:.4f} in "
                    f"[{row.m:.4f}, {row.M:.4f}], {elapsed:.1f}s")
    assert row.m <= modulus <= row.M
    assert 80.2 <= modulus <= 134.4
    assert record.residual < 1e-9
    assert elapsed < 30.0


def test_criterion_8_negative_control():
    # at q = 0.6 e^{i pi/2} only the merged count over |q|^{-3/2} < |z| < |q|^{-7/2}
    # is required of the suite; per-annulus uniqueness for k = 2, 3 is deliberately
    # not asserted anywhere in this acceptance run
    q = ts.QParameter.from_polar(0.6, math.pi / 2)
    report = ts.verify_separation(q, 6, on_error="record")
    ok = report.combined_mid_count == 2
    announce(8, ok, f"merged middle-annulus count = {report.combined_mid_count}, "
                    f"reported without per-k assertions for k = 2, 3")
    assert report.combined_mid_count == 2
    assert report.counts[1] == 1
    assert report.counts[4] == report.counts[5] == report.counts[6] == 1
