import math
import random
import sys

import pytest

from zetasaddle.cnum import LogComplex, scaled_sum
from zetasaddle.direct import SeriesPoint, a_direct, prefactor_log
from zetasaddle.errors import DegenerateSaddleError
from zetasaddle.phase import capital_psi, psi_derivatives
from zetasaddle.saddles import ContributoryRange, contributory_range, refine_saddle
from zetasaddle.sdexp import (
    GAMMA_RATIOS,
    EvaluationReport,
    assemble,
    coefficients,
    contribution,
    omega,
    sqrt_branch,
)
from zetasaddle.tracer import canonical_direction


def test_sqrt_branch_simple_cases():
    assert sqrt_branch(1, math.pi / 2) == pytest.approx(1)
    assert sqrt_branch(-1, 0.0) == pytest.approx(1j)
    assert sqrt_branch(1, -math.pi / 2) == pytest.approx(-1)
    with pytest.raises(DegenerateSaddleError):
        sqrt_branch(0, 0.0)
    with pytest.raises(DegenerateSaddleError):
        sqrt_branch(1e-30, 0.0, psi_ddd=1.0)


def test_branch_sign_matters():
    # the wrong root flips the sign of the single-saddle term; at (20, 1) that
    # roughly doubles the error against the direct value
    p = SeriesPoint(20, 1.0)
    rng = ContributoryRange(1, 4, "heuristic")
    good = assemble(p, rng).rel_err
    flipped = dict((k, canonical_direction(refine_saddle(k, p))) for k in rng.indices)
    flipped[2] += math.pi
    bad = assemble(p, ContributoryRange(1, 4, "traced", flipped)).rel_err
    assert bad > 5 * good


def test_gamma_ratios():
    assert GAMMA_RATIOS == pytest.approx([math.gamma(j + 0.5) / math.gamma(0.5) for j in range(3)], rel=1e-15)


def test_leading_coefficient_is_one():
    p = SeriesPoint(20, 1.0)
    for k in (1, 3):
        d = psi_derivatives(refine_saddle(k, p).w, p)
        for j in (0, 1, 2):
            assert coefficients(d, 0.5, j).c0 == 1


def test_first_coefficient_with_constant_amplitude():
    p = SeriesPoint(30, 2.0)
    d = psi_derivatives(refine_saddle(2, p).w, p)
    c = coefficients(d, 1.0, 2)
    p3, p4 = capital_psi(3, d), capital_psi(4, d)
    expected = -(1 / (2 * d.values[2])) * (5 / 6 * p3**2 - 0.5 * p4)
    assert c.c1 == pytest.approx(expected, rel=1e-14)


def test_coefficients_need_enough_derivatives():
    p = SeriesPoint(20, 1.0)
    d = psi_derivatives(refine_saddle(1, p).w, p, 4)
    with pytest.raises(ValueError):
        coefficients(d, 0.5, 2)
    with pytest.raises(ValueError):
        coefficients(d, 0.5, 3)


def test_truncation_order_improves_with_n():
    # each extra order should gain about a factor n
    errs = {}
    for n in (20, 40, 80):
        p = SeriesPoint(n, 1.0)
        rng = contributory_range(p)
        ref = a_direct(p, 40)
        errs[n] = [abs(assemble(p, rng, j, with_direct=False).asymptotic - ref) / abs(ref) for j in (0, 1, 2)]
    for n in (20, 40, 80):
        e0, e1, e2 = errs[n]
        assert e1 < e0 and e2 < e1
    # error at order q scales roughly like n^{-(q+1)}
    for q in range(3):
        rate = math.log(errs[20][q] / errs[80][q]) / math.log(4)
        assert rate > q + 0.5


def test_isolated_magnitudes():
    p = SeriesPoint(50, 5.0)
    rep = assemble(p)
    ihat = {k: v for k, v, _ in rep.per_saddle}
    assert ihat[2] == pytest.approx(0.019205, abs=2e-5)
    assert abs(rep.asymptotic) == pytest.approx(0.018924, abs=2e-5)
    assert max(ihat, key=ihat.get) == 2


def test_contribution_fields():
    p = SeriesPoint(20, 2.0)
    s = refine_saddle(1, p)
    d = psi_derivatives(s.w, p)
    br = sqrt_branch(s.psi_dd, canonical_direction(s))
    c = contribution(s, p, coefficients(d, p.sigma), br)
    assert c.k == 1
    assert c.i_hat > 0 and c.modulus > 0
    assert math.isfinite(c.log_value.log_mod) and math.isfinite(c.log_value.phase)
    # the modulus includes the correction series, the magnitude does not
    lead = contribution(s, p, coefficients(d, p.sigma, 0), br)
    assert lead.modulus == pytest.approx(c.i_hat, rel=1e-13)


def test_prefactor_beyond_double_range():
    # at (30, 5 pi) 1/Gamma(s) alone overflows a double, A does not
    p = SeriesPoint(30, 5 * math.pi)
    assert prefactor_log(p.n, p.s).real > math.log(sys.float_info.max)
    rep = assemble(p)
    assert 1e-3 < abs(rep.asymptotic) < 1
    assert rep.rel_err < 1e-5


def test_permutation_invariance():
    p = SeriesPoint(50, 4.0)
    rep = assemble(p, with_direct=False)
    rng = contributory_range(p)
    lp = prefactor_log(p.n, p.s)
    terms = []
    for k in rng.indices:
        s = refine_saddle(k, p)
        d = psi_derivatives(s.w, p)
        br = sqrt_branch(s.psi_dd, rng.forward[k])
        terms.append(contribution(s, p, coefficients(d, p.sigma), br, lp).log_value)
    rnd = random.Random(7)
    for _ in range(5):
        rnd.shuffle(terms)
        tot = scaled_sum(terms)
        v = LogComplex(tot.log_mod + lp.real, tot.phase + lp.imag).to_complex()
        assert v == pytest.approx(rep.asymptotic, rel=1e-12)


def test_omega_values():
    p = SeriesPoint(50, math.pi)
    s2 = refine_saddle(2, p)
    assert omega(s2, p) == pytest.approx(0.02235, abs=5e-5)
    assert omega(s2, p, include_t_term=False) == pytest.approx(0.01773, abs=5e-5)


def test_omega_minimum_and_monotone_tail():
    p = SeriesPoint(50, math.pi)
    rep = assemble(p, with_direct=False)
    om = {k: w for k, _, w in rep.per_saddle}
    assert min(om, key=om.get) == 2
    tail = [om[k] for k in sorted(om) if k >= 3]
    assert all(x < y for x, y in zip(tail, tail[1:]))


@pytest.mark.parametrize("n,a", [(50, 5.0), (20, 2.0), (30, 2 * math.pi)])
def test_omega_controls_magnitude(n, a):
    p = SeriesPoint(n, a)
    rep = assemble(p, with_direct=False)
    vals = [math.log(ih) + om * p.t for _, ih, om in rep.per_saddle]
    assert max(vals) - min(vals) <= 3 * math.log(p.t)


def test_error_decreases_with_n():
    assert assemble(SeriesPoint(50, 1.0)).rel_err < assemble(SeriesPoint(20, 1.0)).rel_err


def test_report_invariants():
    with pytest.raises(ValueError):
        EvaluationReport(n=5, a=1.0, sigma=0.5, s=0.5 + 5j, k_star=3, m=2)
    with pytest.raises(ValueError):
        EvaluationReport(n=5, a=1.0, sigma=0.5, s=0.5 + 5j, direct=1j, asymptotic=1j)
    rep = assemble(SeriesPoint(20, 1.5))
    assert EvaluationReport.from_dict(rep.to_dict()) == rep


def test_stokes_flag_near_connection():
    # n = 5 just either side of the connection at a = 6.0342
    for a, m in ((6.034, 5), (6.0345, 6)):
        rep = assemble(SeriesPoint(5, a))
        assert rep.m == m
        assert "stokes_warning" in rep.flags
    rep = assemble(SeriesPoint(20, 2.0))
    assert "stokes_warning" not in rep.flags


def test_n_zero_rejected():
    with pytest.raises(ValueError):
        assemble(SeriesPoint(0, 1.0, 2.0))
