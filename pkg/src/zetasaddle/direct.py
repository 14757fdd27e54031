"""Reference values of A(n, s): the finite binomial sum, quadrature of the
integral representation, and the zeta series built from them."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .cnum import _two_prod, log_gamma
from .errors import ConvergenceError, OutOfRangeError, SingularityError

__all__ = [
    "SeriesPoint",
    "a_direct",
    "a_direct_s",
    "a_quadrature",
    "zeta_series",
    "prefactor_log",
]

PREFACTOR_EPS = 1e-12
MAX_N_MACHINE = 1000
QUAD_T_MAX = 60.0


def _check_prefactor(s: complex) -> complex:
    d = 1.0 - 2.0 ** (1.0 - s)
    if abs(d) < PREFACTOR_EPS:
        raise SingularityError(f"1 - 2^(1-s) vanishes at s = {s}")
    return d


@dataclass(frozen=True)
class SeriesPoint:
    """Evaluation point (n, a, sigma) with s = sigma + i*a*n."""

    n: int
    a: float
    sigma: float = 0.5

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"n must be a non-negative integer, got {self.n!r}")
        if not self.a > 0:
            raise ValueError(f"a must be positive, got {self.a!r}")
        if self.s == 1:
            raise SingularityError("s = 1 is the pole of zeta")
        _check_prefactor(self.s)

    @property
    def t(self) -> float:
        return self.a * self.n

    @property
    def s(self) -> complex:
        return complex(self.sigma, self.a * self.n)


def prefactor_log(n: int, s: complex) -> complex:
    """log of 2^{-n-1} / ((1 - 2^{1-s}) Gamma(s)), principal pieces."""
    d = _check_prefactor(s)
    return -(n + 1) * math.log(2.0) - cmath.log(d) - log_gamma(s)


def _a_direct_mp(n: int, s: complex, digits: int) -> complex:
    with mpmath.workdps(digits):
        ms = mpmath.mpc(s.real, s.imag)
        c = mpmath.ldexp(mpmath.mpf(1), -n - 1)
        total = mpmath.mpc(0)
        for k in range(n + 1):
            term = c * mpmath.power(k + 1, -ms)
            total += -term if k % 2 else term
            c = c * (n - k) / (k + 1)
        val = total / (1 - mpmath.power(2, 1 - ms))
        return complex(val)


_TWO_PI_HI = 2.0 * math.pi
_TWO_PI_LO = 2.4492935982947064e-16  # 2 pi - _TWO_PI_HI


@lru_cache(maxsize=8)
def _log_table(n: int) -> tuple[tuple[float, ...], tuple[float, ...]]:
    # log(k+1), k = 0..n, as unevaluated double-double pairs
    hi, lo = [], []
    with mpmath.workdps(40):
        for k in range(n + 1):
            v = mpmath.log(k + 1)
            h = float(v)
            hi.append(h)
            lo.append(float(v - h))
    return tuple(hi), tuple(lo)


def _reduced_phase(t: float, lhi: float, llo: float) -> float:
    """t * log(k+1) reduced mod 2 pi, correct to a few ulps of pi."""
    p, e = _two_prod(t, lhi)
    j = round(p / _TWO_PI_HI)
    p2, e2 = _two_prod(float(j), _TWO_PI_HI)
    return math.fsum((p, -p2, e, t * llo, -e2, -j * _TWO_PI_LO))


def a_direct_s(n: int, s: complex, precision_digits: int | None = None) -> complex:
    """A(n, s) for arbitrary complex s by the binomial sum.

    At machine precision the weights C(n,k) 2^{-n-1} come from the
    multiplicative recurrence, the phases t*log(k+1) are formed from a
    double-double log table and reduced exactly, and the alternating sum
    is exactly rounded (math.fsum).  With ``precision_digits`` the sum
    runs in mpmath instead.
    """
    s = complex(s)
    d = _check_prefactor(s)
    if precision_digits is not None:
        if precision_digits < 16:
            raise ValueError("precision_digits must be >= 16")
        return _a_direct_mp(n, s, int(precision_digits))
    if n > MAX_N_MACHINE:
        raise OutOfRangeError(f"n = {n} exceeds the machine-precision range (<= {MAX_N_MACHINE})")
    lhi, llo = _log_table(n)
    c = math.ldexp(1.0, -n - 1)
    re, im = [], []
    for k in range(n + 1):
        mag = c * math.exp(-s.real * (lhi[k] + llo[k]))
        if k % 2:
            mag = -mag
        ang = -_reduced_phase(s.imag, lhi[k], llo[k])
        re.append(mag * math.cos(ang))
        im.append(mag * math.sin(ang))
        c = c * (n - k) / (k + 1)
    return complex(math.fsum(re), math.fsum(im)) / d


def a_direct(p: SeriesPoint, precision_digits: int | None = None) -> complex:
    """A(n, s) at s = sigma + i a n by the finite binomial sum."""
    return a_direct_s(p.n, p.s, precision_digits)


_GL_ORDER = 20
_GL_X, _GL_W = np.polynomial.legendre.leggauss(_GL_ORDER)


def _ray_integral(n: int, s: complex, phi: float, u_lo: float, u_hi: float, refine: float) -> tuple[complex, int]:
    # integrate e^{-w}(1-e^{-w})^n w^{s-1} dw along w = e^{u + i phi};
    # in u the factor w^{it} has fixed period 2 pi / t, and the panel width
    # is further capped by the period 2 pi of e^{-w} at large |w|
    t = abs(s.imag)
    edges = [u_lo]
    u = u_lo
    h_osc = min(0.25, math.pi / (4.0 * max(t, 1.0)))
    while u < u_hi:
        h = min(h_osc, 0.3 / math.exp(u)) * refine
        u = min(u + h, u_hi)
        edges.append(u)
    e = np.asarray(edges)
    lo, hi = e[:-1, None], e[1:, None]
    half = 0.5 * (hi - lo)
    uu = 0.5 * (hi + lo) + half * _GL_X
    ww = np.exp(uu + 1j * phi)
    logf = -ww + s * (uu + 1j * phi)  # w^{s-1} dw = w^s du
    if n:
        logf = logf + n * np.log(-np.expm1(-ww))
    vals = np.exp(logf) * (half * _GL_W)
    return complex(vals.sum()), len(edges) - 1


def a_quadrature(p: SeriesPoint, rtol: float = 1e-11, max_panels: int = 400_000) -> complex:
    """A(n, s) by quadrature of its integral representation.

    The ray [0, inf) is rotated to arg w = phi < pi/2 (Cauchy; the integrand
    is analytic in the sector), which absorbs most of the e^{-pi t/2}
    cancellation that makes real-axis quadrature useless at moderate t.
    """
    if p.sigma <= 0:
        raise OutOfRangeError("quadrature needs sigma > 0")
    if p.t > QUAD_T_MAX:
        raise OutOfRangeError(f"quadrature limited to t <= {QUAD_T_MAX}, got t = {p.t}")
    n, s, t = p.n, p.s, p.t
    delta = min(0.5 * math.pi, 4.0 / t) if t > 0 else 0.5 * math.pi
    phi = 0.5 * math.pi - delta
    # integrand / result ~ e^{t delta}/|A| at worst; keep 1e-30 headroom beyond that
    margin = 90.0 + t * delta
    u_lo = -margin / (p.sigma + n)
    u_hi = math.log((margin + 30.0) / math.cos(phi) + 40.0)
    logpre = prefactor_log(n, s)
    refine = 1.0
    prev, panels = _ray_integral(n, s, phi, u_lo, u_hi, refine)
    while True:
        refine *= 0.5
        cur, panels = _ray_integral(n, s, phi, u_lo, u_hi, refine)
        if abs(cur - prev) <= rtol * abs(cur):
            return cur * cmath.exp(logpre)
        if panels > max_panels:
            raise ConvergenceError(f"quadrature did not converge within {max_panels} panels")
        prev = cur


def zeta_series(s: complex, n_max: int, precision_digits: int | None = None) -> complex:
    """Partial sum sum_{n=0}^{n_max} A(n, s) of the globally convergent series.

    The terms decay roughly like 2^{-n} for fixed s, so n_max ~ 3.3 * digits
    suffices when |Im s| is small; larger |Im s| needs n_max of order |Im s|.
    """
    s = complex(s)
    if s == 1:
        raise SingularityError("s = 1 is the pole of zeta")
    terms = [a_direct_s(n, s, precision_digits) for n in range(n_max + 1)]
    return complex(math.fsum(z.real for z in terms), math.fsum(z.imag for z in terms))
