"""The phase function psi(w) = log(1 - e^{-w}) + i a log w - w/n and its
derivatives.

Derivatives of g(w) = 1/(e^w - 1) are polynomials in g, generated from
g' = -g - g^2; the polynomial coefficients are built once at import.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .cnum import expm1, principal_arg
from .direct import SeriesPoint
from .errors import DegenerateSaddleError, SingularityError

__all__ = [
    "PhaseDerivatives",
    "psi",
    "psi_derivatives",
    "psi_dd_at_saddle",
    "f_ratio",
    "capital_psi",
    "g",
    "g_derivative",
]

MAX_ORDER = 6
SINGULAR_EPS = 1e-8


def _g_polys(m_max: int) -> list[tuple[int, ...]]:
    # coefficient lists c with g^{(m)} = sum_i c[i] g^i
    polys = [(0, 1)]
    for _ in range(m_max):
        p = polys[-1]
        q = [0] * (len(p) + 1)
        for i in range(1, len(p)):
            # d/dw g^i = i g^{i-1} g' = -i (g^i + g^{i+1})
            q[i] -= i * p[i]
            q[i + 1] -= i * p[i]
        polys.append(tuple(q))
    return polys


G_POLYS = _g_polys(MAX_ORDER - 1)


def _distance_to_singularity(w: complex) -> float:
    k = round(w.imag / (2.0 * math.pi))
    return abs(w - complex(0.0, 2.0 * math.pi * k))


def _check_regular(w: complex, eps: float = 0.0) -> None:
    if _distance_to_singularity(w) <= eps or w == 0:
        raise SingularityError(f"w = {w} is at a singularity 2*pi*i*k of the phase")


def g(w: complex) -> complex:
    """1/(e^w - 1), stable near the origin and for large |Re w|."""
    if w.real > 0:
        q = cmath.exp(-w)
        return q / -expm1(-w)
    return 1.0 / expm1(w)


def g_derivative(m: int, w: complex) -> complex:
    """m-th derivative of g via its polynomial in g."""
    gv = g(w)
    acc = 0j
    for c in reversed(G_POLYS[m]):
        acc = acc * gv + c
    return acc


def log1m_exp_neg(w: complex) -> complex:
    """Principal log(1 - e^{-w})."""
    if w.real >= -1.0:
        return cmath.log(-expm1(-w))
    # 1 - e^{-w} = e^{-w} (e^{w} - 1)
    v = -w + cmath.log(expm1(w))
    return complex(v.real, principal_arg(v.imag))


def _inv_n(p: SeriesPoint) -> float:
    return 1.0 / p.n


def psi_raw(w: complex, a: float, inv_n: float) -> complex:
    return log1m_exp_neg(w) + 1j * a * cmath.log(w) - w * inv_n


def dpsi_raw(w: complex, a: float, inv_n: float) -> complex:
    return g(w) + 1j * a / w - inv_n


def d2psi_raw(w: complex, a: float) -> complex:
    return g_derivative(1, w) - 1j * a / (w * w)


def psi(w: complex, p: SeriesPoint) -> complex:
    """psi(w, n) on the principal branches of both logarithms."""
    w = complex(w)
    _check_regular(w)
    return psi_raw(w, p.a, _inv_n(p))


@dataclass(frozen=True)
class PhaseDerivatives:
    """values[j] = psi^{(j)}(at_point), j = 0..j_max."""

    values: tuple[complex, ...]
    at_point: complex

    @property
    def j_max(self) -> int:
        return len(self.values) - 1


def derivative_values(w: complex, a: float, inv_n: float, j_max: int) -> tuple[complex, ...]:
    vals = [psi_raw(w, a, inv_n)]
    if j_max >= 1:
        vals.append(dpsi_raw(w, a, inv_n))
    gv = g(w)
    for j in range(2, j_max + 1):
        gm = 0j
        for c in reversed(G_POLYS[j - 1]):
            gm = gm * gv + c
        vals.append(gm + 1j * a * (-1) ** (j - 1) * math.factorial(j - 1) / w**j)
    return tuple(vals)


def psi_derivatives(w: complex, p: SeriesPoint, j_max: int = MAX_ORDER) -> PhaseDerivatives:
    if not 0 <= j_max <= MAX_ORDER:
        raise ValueError(f"j_max must lie in 0..{MAX_ORDER}")
    w = complex(w)
    _check_regular(w, SINGULAR_EPS)
    return PhaseDerivatives(derivative_values(w, p.a, _inv_n(p), j_max), w)


def psi_dd_at_saddle(w: complex, p: SeriesPoint) -> complex:
    """psi'' rewritten with the saddle condition g = 1/n - i a/w substituted.

    Only equal to the generic psi'' at a root of psi'; used as a check.
    """
    return (1j * p.a / w - _inv_n(p)) / -expm1(-w) - 1j * p.a / (w * w)


def f_ratio(j: int, sigma: float, w: complex) -> complex:
    """f^{(j)}/f for the amplitude f(w) = w^{sigma-1}."""
    if w == 0:
        raise SingularityError("f_ratio undefined at w = 0")
    num = 1.0
    for i in range(1, j + 1):
        num *= sigma - i
    return num / complex(w) ** j


def capital_psi(j: int, d: PhaseDerivatives) -> complex:
    """psi^{(j)} / psi''."""
    pdd, pj = d.values[2], d.values[j]
    if pj == 0:
        return 0j
    if abs(pdd) < 1e-13 * abs(pj):
        raise DegenerateSaddleError(f"psi'' = {pdd} is negligible against psi^({j}) = {pj}")
    return pj / pdd
