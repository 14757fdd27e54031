"""Acceptance criteria, each at its stated tolerance.

Every test records one ``CRITERION n: PASS|FAIL ...`` line that is echoed
in the pytest terminal summary.  The file can also be run directly.
"""

import math
import sys
import time

import pytest

from zetasaddle.direct import SeriesPoint, a_direct_s
from zetasaddle.phase import psi_derivatives
from zetasaddle.saddles import refine_saddle, saddle_string
from zetasaddle.sdexp import assemble, omega
from zetasaddle.tables import (
    ANNOTATIONS,
    TABLE1,
    TABLE1_PARAMS,
    TABLE2,
    TABLE3,
    TABLE4,
    matches_printed,
    rounds_to,
    split_complex,
)
from zetasaddle.tracer import classify_paths, detect_stokes


def report(record, number, failures, detail=""):
    status = "PASS" if not failures else "FAIL"
    text = f"CRITERION {number}: {status}"
    if detail:
        text += f" ({detail})"
    if failures:
        text += " -- " + "; ".join(failures)
    record(text)
    assert not failures, text


def check_cells(row, value, part, units, failures):
    printed = getattr(row, part)
    for comp, txt, got in zip(("re", "im"), split_complex(printed), (value.real, value.imag)):
        if not matches_printed(got, txt, units):
            failures.append(f"{row.label} {part}.{comp}: printed {txt}, computed {got:+.12f}")


def check_row_table(rows, failures, units_direct=1, units_asym=2, rel_rows=()):
    reps = {}
    for row in rows:
        rep = assemble(row.point, j_max=2)
        reps[row.label] = rep
        check_cells(row, rep.direct, "direct", units_direct, failures)
        if row.label in rel_rows:
            if not rep.rel_err <= 5e-4:
                failures.append(f"{row.label}: rel err {rep.rel_err:.2e} > 5e-4")
        else:
            check_cells(row, rep.asymptotic, "asymptotic", units_asym, failures)
    return reps


def test_criterion_1_table1(record_acceptance):
    failures = []
    t0 = time.perf_counter()
    cols = {h: saddle_string(SeriesPoint(*TABLE1_PARAMS[h]), 7) for h in TABLE1}
    elapsed = time.perf_counter() - t0
    checked = 0
    for h, printed in TABLE1.items():
        for i, (txt, s) in enumerate(zip(printed, cols[h])):
            k = i + 1
            if s.residual > 1e-12:
                failures.append(f"{h} k={k}: residual {s.residual:.1e}")
            if (1, h, f"k={k}") in ANNOTATIONS and "duplicate" in ANNOTATIONS[(1, h, f"k={k}")]:
                if not 10 * math.pi < s.w.imag < 12 * math.pi:
                    failures.append(f"{h} k={k}: Im w = {s.w.imag} outside (10pi, 12pi)")
                continue
            checked += 1
            re_txt, im_txt = split_complex(txt)
            if not (rounds_to(s.w.real, re_txt) and rounds_to(s.w.imag, im_txt)):
                failures.append(f"{h} k={k}: printed {txt}, computed {s.w.real:+.7f}{s.w.imag:+.7f}i")
    if checked != 13:
        failures.append(f"{checked} unflagged cells checked")
    if elapsed >= 1.0:
        failures.append(f"runtime {elapsed:.2f} s")
    report(record_acceptance, 1, failures, f"{checked} cells, {elapsed * 1e3:.0f} ms")


def test_criterion_2_table2(record_acceptance):
    failures = []
    t0 = time.perf_counter()
    check_row_table(TABLE2, failures, rel_rows=("a=1.00",))
    elapsed = time.perf_counter() - t0
    if elapsed >= 5.0:
        failures.append(f"runtime {elapsed:.2f} s")
    report(record_acceptance, 2, failures, f"{len(TABLE2)} rows, {elapsed:.2f} s")


def test_criterion_3_table3(record_acceptance):
    failures = []
    reps = check_row_table(TABLE3, failures)
    for row in TABLE3:
        rep = reps[row.label]
        if rep.method != "traced" or rep.m != row.m:
            failures.append(f"{row.label}: m = {rep.m} ({rep.method}), printed {row.m}")
    report(record_acceptance, 3, failures, f"{len(TABLE3)} rows")


def test_criterion_4_table4(record_acceptance):
    failures = []
    t0 = time.perf_counter()
    reps = check_row_table(TABLE4, failures, units_direct=2)
    elapsed = time.perf_counter() - t0
    for N, row in enumerate(TABLE4, start=1):
        rep = reps[row.label]
        if rep.k_star != (N + 1) // 2:
            failures.append(f"{row.label}: k* = {rep.k_star}")
        if rep.m != row.m:
            failures.append(f"{row.label}: m = {rep.m}, printed {row.m}")
    if elapsed >= 30.0:
        failures.append(f"runtime {elapsed:.2f} s")
    report(record_acceptance, 4, failures, f"{elapsed:.2f} s")


def test_criterion_5_scalars(record_acceptance):
    failures = []

    def near(name, got, want, tol):
        if not abs(got - want) <= tol:
            failures.append(f"{name} = {got:.6f}, want {want} +- {tol}")

    rep = assemble(SeriesPoint(50, 5.0), with_direct=False)
    ihat = {k: v for k, v, _ in rep.per_saddle}
    near("I2(50,5)", ihat[2], 0.019205, 2e-5)
    near("|A|(50,5)", abs(rep.asymptotic), 0.018924, 2e-5)

    rep = assemble(SeriesPoint(20, 6 * math.pi), with_direct=False)
    ihat = {k: v for k, v, _ in rep.per_saddle}
    near("I6(20,6pi)", ihat[6], 0.01634, 5e-4)
    near("|A|(20,6pi)", abs(rep.asymptotic), 0.03653, 5e-4)

    p = SeriesPoint(50, math.pi)
    s2 = refine_saddle(2, p)
    near("omega2(50,pi)", omega(s2, p), 0.02235, 5e-5)
    near("omega2 without t term", omega(s2, p, include_t_term=False), 0.01773, 5e-5)
    report(record_acceptance, 5, failures)


def test_criterion_6_stokes(record_acceptance):
    failures = []
    a_star = detect_stokes(SeriesPoint(5, 6.0), 5.5, 6.5)
    if a_star is None:
        failures.append("no crossing found")
    else:
        if not abs(a_star - 6.032) <= 5e-3:
            failures.append(f"a* = {a_star:.6f}")
        if not abs(5 * a_star - 30.160) <= 0.03:
            failures.append(f"t* = {5 * a_star:.4f}")
    detail = f"a* = {a_star:.6f}, t* = {5 * a_star:.4f}" if a_star is not None else ""
    report(record_acceptance, 6, failures, detail)


def test_criterion_7_series(record_acceptance):
    total = math.fsum(a_direct_s(n, 2).real for n in range(81))
    err = abs(total - math.pi**2 / 6)
    failures = [] if err <= 1e-13 else [f"error {err:.2e}"]
    report(record_acceptance, 7, failures, f"error {err:.1e}")


TABLE_POINTS = [row.point for row in TABLE2 + TABLE3 + TABLE4]


def property_failures():
    failures = []

    # derivatives of psi against a five-point central difference on a fixed grid
    h = 1e-3
    worst = 0.0
    for n in (10, 30, 80):
        for a in (0.5, 2.0, 7.0):
            p = SeriesPoint(n, a)
            for w in (0.7 + 2.2j, -1.3 + 9.0j, 2.5 + 15.0j, 1.0 + 40.0j):
                d = psi_derivatives(w, p, 6).values
                for j in range(2, 7):
                    f = [psi_derivatives(w + k * h, p, 6).values[j - 1] for k in (-2, -1, 1, 2)]
                    fd = (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * h)
                    worst = max(worst, abs(fd - d[j]) / max(1.0, abs(d[j])))
    if worst > 1e-6:
        failures.append(f"finite-difference mismatch {worst:.1e}")

    # descent paths keep Im psi and decrease Re psi
    drift = 0.0
    for n, a in ((20, 1.0), (50, 2.0), (30, 2 * math.pi)):
        p = SeriesPoint(n, a)
        rng, paths = classify_paths(p)
        for k in rng.indices:
            for q in paths[k]:
                drift = max(drift, q.im_drift)
                re = [pt.re_psi for pt in q.points]
                if any(b > a_ + 1e-9 for a_, b in zip(re, re[1:])):
                    failures.append(f"Re psi rises on path k={k} at {(n, a)}")
    if drift > 1e-6:
        failures.append(f"Im psi drift {drift:.1e}")

    # omega positive on every contributory saddle of every table row
    for p in TABLE_POINTS:
        rep = assemble(p, with_direct=False)
        bad = [k for k, _, om in rep.per_saddle if not om > 0]
        if bad:
            failures.append(f"omega <= 0 at ({p.n}, {p.a:.4f}) k={bad}")

    # location of the largest contribution
    for N in (2, 3, 4, 5):
        rep = assemble(SeriesPoint(30, N * math.pi), with_direct=False)
        top = max(rep.per_saddle, key=lambda r: r[1])[0]
        if top != N:
            failures.append(f"largest I_k at k={top} for a={N}pi")
    for n in (20, 50):
        for a in (0.5, 1.0, 2.0):
            rep = assemble(SeriesPoint(n, a), with_direct=False)
            top = max(rep.per_saddle, key=lambda r: r[1])[0]
            if top != 1:
                failures.append(f"largest I_k at k={top} for ({n}, {a})")

    e50 = assemble(SeriesPoint(50, 1.0)).rel_err
    e20 = assemble(SeriesPoint(20, 1.0)).rel_err
    if not e50 < e20:
        failures.append(f"rel err {e50:.1e} at n=50 not below {e20:.1e} at n=20")
    return failures


def test_criterion_8_properties(record_acceptance):
    report(record_acceptance, 8, property_failures())


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
