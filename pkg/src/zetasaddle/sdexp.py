"""Saddle-point expansion of A(n, s): coefficients, per-saddle
contributions in log form, assembly and decay exponents."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .cnum import LogComplex, scaled_sum
from .direct import MAX_N_MACHINE, SeriesPoint, a_direct, prefactor_log
from .errors import DegenerateSaddleError
from .phase import PhaseDerivatives, capital_psi, derivative_values, f_ratio, log1m_exp_neg
from .saddles import (
    ContributoryRange,
    Saddle,
    contributory_range,
    newton_root,
    refine_saddle,
    saddle_phase_gap,
)
from .tracer import canonical_direction

__all__ = [
    "ExpansionCoefficients",
    "LogContribution",
    "EvaluationReport",
    "GAMMA_RATIOS",
    "sqrt_branch",
    "coefficients",
    "contribution",
    "assemble",
    "omega",
]

# Gamma(j + 1/2) / Gamma(1/2) for j = 0, 1, 2
GAMMA_RATIOS = (1.0, 0.5, 0.75)
STOKES_GAP = 1e-3


@dataclass(frozen=True)
class ExpansionCoefficients:
    c0: complex
    c1: complex
    c2: complex
    j_max: int

    def series(self, n: int) -> complex:
        """sum_j c_j n^{-j} Gamma(j+1/2)/Gamma(1/2) up to j_max."""
        return self.c0 + GAMMA_RATIOS[1] * self.c1 / n + GAMMA_RATIOS[2] * self.c2 / (n * n)


@dataclass(frozen=True)
class LogContribution:
    """One saddle's share.  ``log_value`` is I_k without the common
    prefactor; ``i_hat`` is the leading-order modulus with the prefactor,
    ``modulus`` the same with the correction series included."""

    k: int
    log_value: LogComplex
    i_hat: float
    modulus: float
    omega: float
    direction: float


def _cx(z: complex | None) -> dict | None:
    return None if z is None else {"re": z.real, "im": z.imag}


def _uncx(d: dict | None) -> complex | None:
    return None if d is None else complex(d["re"], d["im"])


@dataclass
class EvaluationReport:
    """Outcome of one evaluation.  Direct-only evaluations leave the saddle
    fields empty; the errors are present exactly when both values are."""

    n: int
    a: float | None
    sigma: float
    s: complex
    j_max: int | None = None
    k_star: int | None = None
    m: int | None = None
    method: str | None = None
    saddles: list = field(default_factory=list)  # (k, w, residual)
    asymptotic: complex | None = None
    direct: complex | None = None
    abs_err: float | None = None
    rel_err: float | None = None
    per_saddle: list = field(default_factory=list)  # (k, i_hat, omega)
    flags: list = field(default_factory=list)

    def __post_init__(self):
        if self.m is not None and self.k_star is not None and self.m < self.k_star:
            raise ValueError("report needs m >= k_star")
        both = self.direct is not None and self.asymptotic is not None
        if (self.rel_err is not None) != both:
            raise ValueError("rel_err is present exactly when direct and asymptotic both are")

    def to_dict(self) -> dict:
        return {
            "inputs": {"n": self.n, "a": self.a, "sigma": self.sigma, "s": _cx(self.s), "j_max": self.j_max},
            "k_star": self.k_star,
            "m": self.m,
            "method": self.method,
            "saddles": [{"k": k, "w": _cx(w), "residual": r} for k, w, r in self.saddles],
            "direct": _cx(self.direct),
            "asymptotic": _cx(self.asymptotic),
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "per_saddle": [{"k": k, "i_hat": ih, "omega": om} for k, ih, om in self.per_saddle],
            "flags": list(self.flags),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EvaluationReport":
        inp = d["inputs"]
        return cls(
            n=inp["n"], a=inp["a"], sigma=inp["sigma"], s=_uncx(inp["s"]), j_max=inp["j_max"],
            k_star=d["k_star"], m=d["m"], method=d["method"],
            saddles=[(x["k"], _uncx(x["w"]), x["residual"]) for x in d["saddles"]],
            direct=_uncx(d["direct"]), asymptotic=_uncx(d["asymptotic"]),
            abs_err=d["abs_err"], rel_err=d["rel_err"],
            per_saddle=[(x["k"], x["i_hat"], x["omega"]) for x in d["per_saddle"]],
            flags=list(d["flags"]),
        )


def sqrt_branch(psi_dd: complex, descent_angle: float, psi_ddd: complex | None = None) -> complex:
    """The root r of psi'' with arg(i/r) within pi/2 of ``descent_angle``."""
    psi_dd = complex(psi_dd)
    scale = abs(psi_ddd) ** (2.0 / 3.0) if psi_ddd is not None else 0.0
    if psi_dd == 0 or abs(psi_dd) < 1e-13 * scale:
        raise DegenerateSaddleError(f"psi'' = {psi_dd} is degenerate")
    r = cmath.sqrt(psi_dd)
    if math.cos(cmath.phase(1j / r) - descent_angle) < 0:
        r = -r
    return r


def coefficients(d: PhaseDerivatives, sigma: float, j_max: int = 2) -> ExpansionCoefficients:
    if not 0 <= j_max <= 2:
        raise ValueError("j_max must be 0, 1 or 2")
    if d.j_max < 2 + 2 * j_max:
        raise ValueError(f"need derivatives through order {2 + 2 * j_max}")
    if j_max == 0:
        return ExpansionCoefficients(1.0 + 0j, 0j, 0j, 0)
    w, p2 = d.at_point, d.values[2]
    P3, P4 = capital_psi(3, d), capital_psi(4, d)
    F1, F2 = f_ratio(1, sigma, w), f_ratio(2, sigma, w)
    c1 = -1.0 / (2.0 * p2) * (2.0 * F2 - 2.0 * P3 * F1 + 5.0 / 6.0 * P3 * P3 - 0.5 * P4)
    if j_max == 1:
        return ExpansionCoefficients(1.0 + 0j, c1, 0j, 1)
    P5, P6 = capital_psi(5, d), capital_psi(6, d)
    F3, F4 = f_ratio(3, sigma, w), f_ratio(4, sigma, w)
    c2 = (1.0 / (2.0 * p2)) ** 2 * (
        2.0 / 3.0 * F4
        - 20.0 / 9.0 * P3 * F3
        + 5.0 / 3.0 * (7.0 / 3.0 * P3**2 - P4) * F2
        - 35.0 / 9.0 * (P3**3 - P3 * P4 + 6.0 / 35.0 * P5) * F1
        + 35.0 / 9.0 * (11.0 / 24.0 * P3**4 - 0.75 * (P3**2 - P4 / 6.0) * P4 + 0.2 * P3 * P5 - P6 / 35.0)
    )
    return ExpansionCoefficients(1.0 + 0j, c1, c2, 2)


def _log_w(w: complex) -> complex:
    return complex(math.log(abs(w)), cmath.phase(w))


def _leading_log(s: Saddle, p: SeriesPoint, branch: complex) -> complex:
    n, w = p.n, s.w
    return (
        complex(0.5 * math.log(2.0 * math.pi / n), 0.5 * math.pi)
        - w
        + n * log1m_exp_neg(w)
        - _log_w(branch)
        + (p.s - 1.0) * _log_w(w)
    )


def contribution(s: Saddle, p: SeriesPoint, coeffs: ExpansionCoefficients, branch: complex,
                 log_prefactor: complex | None = None, direction: float | None = None) -> LogContribution:
    lead = _leading_log(s, p, branch)
    ser = coeffs.series(p.n)
    full = lead + cmath.log(ser)
    lp = prefactor_log(p.n, p.s) if log_prefactor is None else log_prefactor
    return LogContribution(
        k=s.k,
        log_value=LogComplex.from_log(full),
        i_hat=math.exp((lead + lp).real),
        modulus=math.exp((full + lp).real),
        omega=omega(s, p),
        direction=cmath.phase(1j / branch) if direction is None else direction,
    )


def omega(s: Saddle, p: SeriesPoint, include_t_term: bool = True) -> float:
    """Decay rate: the k-th contribution is of order exp(-omega t).

    Without the 1/t term the saddle is also taken in the large-n limit
    (the 1/n term of the saddle equation dropped), which is the form in
    which this exponent is usually quoted.
    """
    w = s.w
    if not include_t_term:
        w = newton_root(w, p.a, 0.0)
    val = cmath.phase(w) - 0.5 * math.pi - (log1m_exp_neg(w).real - math.log(2.0)) / p.a
    if include_t_term:
        val += w.real / p.t
    return val


def _saddle_terms(p: SeriesPoint, rng: ContributoryRange, j_max: int, lp: complex,
                  flags: list) -> tuple[list[Saddle], list[LogContribution]]:
    saddles, contribs = [], []
    inv_n = 1.0 / p.n
    for k in rng.indices:
        s = refine_saddle(k, p)
        d = PhaseDerivatives(derivative_values(s.w, p.a, inv_n, 6), s.w)
        canon = canonical_direction(s)
        angle = rng.forward.get(k, canon)
        try:
            br = sqrt_branch(s.psi_dd, angle, d.values[3])
            if abs(br - sqrt_branch(s.psi_dd, canon)) > 1e-12 * abs(br) and "branch_disagreement" not in flags:
                flags.append("branch_disagreement")
            co = coefficients(d, p.sigma, j_max)
        except DegenerateSaddleError as exc:
            raise DegenerateSaddleError(f"saddles {k - 1} and {k}: {exc}") from None
        saddles.append(s)
        contribs.append(contribution(s, p, co, br, lp, angle))
    return saddles, contribs


def _near_connection(p: SeriesPoint, top: Saddle) -> bool:
    # the connection can be approached from either side: just before it the
    # pair is (m, m+1), just after it (m-1, m)
    pairs = [(top, refine_saddle(top.k + 1, p))]
    if top.k >= 2:
        pairs.append((refine_saddle(top.k - 1, p), top))
    return any(abs(saddle_phase_gap(lo, hi, p).imag) < STOKES_GAP for lo, hi in pairs)


def assemble(p: SeriesPoint, rng: ContributoryRange | None = None, j_max: int = 2,
             with_direct: bool = True, precision_digits: int | None = None) -> EvaluationReport:
    """A(n, s) as the prefactor times the sum of the saddle contributions
    k_star..m, with the direct value alongside when it is affordable."""
    if p.n < 1:
        raise ValueError("the expansion needs n >= 1")
    if rng is None:
        rng = contributory_range(p, "traced")
    flags = list(rng.flags)
    lp = prefactor_log(p.n, p.s)
    saddles, contribs = _saddle_terms(p, rng, j_max, lp, flags)
    total = scaled_sum(c.log_value for c in contribs)
    value = LogComplex(total.log_mod + lp.real, total.phase + lp.imag).to_complex()
    if "stokes_warning" not in flags and _near_connection(p, saddles[-1]):
        flags.append("stokes_warning")
    report = EvaluationReport(
        n=p.n, a=p.a, sigma=p.sigma, s=p.s, j_max=j_max,
        k_star=rng.k_star, m=rng.m, method=rng.method,
        saddles=[(s.k, s.w, s.residual) for s in saddles],
        asymptotic=value,
        per_saddle=[(c.k, c.i_hat, c.omega) for c in contribs],
        flags=flags,
    )
    if with_direct and (precision_digits is not None or p.n <= MAX_N_MACHINE):
        dv = a_direct(p, precision_digits)
        report.direct = dv
        report.abs_err = abs(value - dv)
        report.rel_err = report.abs_err / abs(dv) if dv != 0 else math.inf
    return report
