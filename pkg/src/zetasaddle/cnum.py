"""Complex special functions and log-space arithmetic.

Everything here uses the principal argument, arg in (-pi, pi].  Winding
across sheets is the tracer's business, never this module's.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable

from .errors import PoleError, SingularityError

__all__ = [
    "LogComplex",
    "log_gamma",
    "pow_principal",
    "scaled_sum",
    "expm1",
    "principal_arg",
]

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
LOG_PI = math.log(math.pi)

# Lanczos approximation, g = 7, nine terms.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


@dataclass(frozen=True)
class LogComplex:
    """The complex number exp(log_mod + i*phase).

    ``phase`` is deliberately left unreduced so that sums of phases coming
    from different sheets stay exact until the final exponentiation.
    """

    log_mod: float
    phase: float

    @classmethod
    def from_complex(cls, z: complex) -> "LogComplex":
        if z == 0:
            return cls(-math.inf, 0.0)
        return cls(log_abs(z), arg(z))

    @classmethod
    def from_log(cls, z: complex) -> "LogComplex":
        """Wrap an already computed complex logarithm."""
        return cls(z.real, z.imag)

    def to_complex(self) -> complex:
        if self.log_mod == -math.inf:
            return 0j
        return cmath.rect(math.exp(self.log_mod), math.remainder(self.phase, 2.0 * math.pi))

    @property
    def modulus(self) -> float:
        return math.exp(self.log_mod)

    def as_log(self) -> complex:
        return complex(self.log_mod, self.phase)

    def __mul__(self, other: "LogComplex") -> "LogComplex":
        if not isinstance(other, LogComplex):
            return NotImplemented
        return LogComplex(self.log_mod + other.log_mod, self.phase + other.phase)

    def __truediv__(self, other: "LogComplex") -> "LogComplex":
        if not isinstance(other, LogComplex):
            return NotImplemented
        return LogComplex(self.log_mod - other.log_mod, self.phase - other.phase)


def log_abs(z: complex) -> float:
    """log|z| without forming |z| (abs() can raise on extreme component ratios)."""
    x, y = abs(z.real), abs(z.imag)
    big, small = (x, y) if x >= y else (y, x)
    r = small / big
    return math.log(big) + 0.5 * math.log1p(r * r)


def arg(z: complex) -> float:
    """Principal argument; unlike cmath.phase it does not raise when the
    result underflows."""
    return math.atan2(z.imag, z.real)


def principal_arg(x: float) -> float:
    """Reduce an angle into (-pi, pi]."""
    r = math.remainder(x, 2.0 * math.pi)
    return math.pi if r == -math.pi else r


def expm1(z: complex) -> complex:
    """exp(z) - 1 without cancellation for small |z|."""
    x, y = z.real, z.imag
    if y == 0.0:
        return complex(math.expm1(x), 0.0)
    s = math.sin(0.5 * y)
    re = math.expm1(x) * math.cos(y) - 2.0 * s * s
    im = math.exp(x) * math.sin(y)
    return complex(re, im)


# ln 2 split so that e * _LN2_HI is exact for |e| < 2**20
_LN2_HI = 6.93147180369123816490e-01
_LN2_LO = 1.90821492927058770002e-10
_SPLIT = 134217729.0  # 2**27 + 1


def _two_prod(a: float, b: float) -> tuple[float, float]:
    # Dekker: a*b == p + e exactly
    p = a * b
    t = _SPLIT * a
    ah = t - (t - a)
    al = a - ah
    t = _SPLIT * b
    bh = t - (t - b)
    bl = b - bh
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def _lanczos_log_gamma(z: complex) -> complex:
    # valid for Re z >= 1/2; the (z - 1/2) log t term dominates for large |Im z|
    # and is accumulated with error-free products
    zs = z - 1.0
    x = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        x += _LANCZOS_COEF[i] / (zs + i)
    t = zs + _LANCZOS_G + 0.5
    ur, ui = z.real - 0.5, z.imag
    m, e = math.frexp(abs(t))
    lr_hi = e * _LN2_HI
    lr_lo = e * _LN2_LO + math.log(m)
    li = math.atan2(t.imag, t.real)
    lx = cmath.log(x)
    re = math.fsum((*_two_prod(ur, lr_hi), ur * lr_lo, *_two_prod(-ui, li),
                    -t.real, lx.real, LOG_SQRT_2PI))
    im = math.fsum((*_two_prod(ui, lr_hi), ui * lr_lo, *_two_prod(ur, li),
                    -t.imag, lx.imag))
    return complex(re, im)


def _sincos_pi(x: float) -> tuple[float, float]:
    """(sin(pi x), cos(pi x)) with exact zeros at integers and half-integers."""
    r = math.remainder(x, 2.0)
    q = round(2.0 * r)
    f = r - 0.5 * q
    s, c = math.sin(math.pi * f), math.cos(math.pi * f)
    q %= 4
    if q == 0:
        return s, c
    if q == 1:
        return c, -s
    if q == 2:
        return -s, -c
    return -c, s


def _log_sin_pi(z: complex) -> complex:
    """Principal log of sin(pi*z), safe for large |Im z|."""
    x, y = z.real, z.imag
    sp, cp = _sincos_pi(x)
    if abs(y) < 20.0:
        py = math.pi * y
        im = cp * math.sinh(py) + 0.0
        if y == 0.0 and cp != 0.0:
            im = math.copysign(0.0, cp)  # side of the cut approached from y > 0
        return cmath.log(complex(sp * math.cosh(py) + 0.0, im))
    # sin(pi z) ~ e^{pi |y|}/2 * (sin(pi x) + i cos(pi x) sgn y) * (1 - e^{-2 pi |y|} e^{...})
    if y > 0:
        lead = complex(sp + 0.0, cp + 0.0)
        tail = cmath.exp(2j * math.pi * z)
    else:
        lead = complex(sp + 0.0, -cp + 0.0)
        tail = cmath.exp(-2j * math.pi * z)
    val = complex(math.pi * abs(y) - math.log(2.0), 0.0) + cmath.log(lead) + cmath.log(1.0 - tail)
    return complex(val.real, principal_arg(val.imag))


def log_gamma(z: complex) -> complex:
    """Principal branch of log Gamma(z).

    Lanczos for Re z >= 1/2; reflection with the branch correction of
    Hare (1997) otherwise.  On the negative real axis the limit from the
    upper half-plane is returned.  Raises PoleError at non-positive integers.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise PoleError(f"gamma has a pole at {z.real:g}")
    if z.real >= 0.5:
        return _lanczos_log_gamma(z)
    if z.imag < 0.0:
        return log_gamma(z.conjugate()).conjugate()
    z = complex(z.real, z.imag + 0.0)
    corr = 2.0 * math.pi * math.floor(0.5 * z.real + 0.25)
    return complex(LOG_PI, corr) - _log_sin_pi(z) - _lanczos_log_gamma(1.0 - z)


def pow_principal(w: complex, e: complex) -> LogComplex:
    """w**e on the principal sheet, returned in log form."""
    if w == 0:
        raise SingularityError("zero base in pow_principal")
    lw = complex(math.log(abs(w)), cmath.phase(w))
    return LogComplex.from_log(e * lw)


def scaled_sum(terms: Iterable[LogComplex]) -> LogComplex:
    """Exact-rounded sum of log-form terms, factoring out the largest modulus."""
    terms = list(terms)
    if not terms:
        raise ValueError("scaled_sum needs at least one term")
    top = max(t.log_mod for t in terms)
    if top == -math.inf:
        return LogComplex(-math.inf, 0.0)
    parts = [LogComplex(t.log_mod - top, t.phase).to_complex() for t in terms]
    total = complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))
    if total == 0:
        return LogComplex(-math.inf, 0.0)
    return LogComplex(top + log_abs(total), arg(total))
