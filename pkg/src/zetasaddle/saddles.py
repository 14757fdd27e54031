"""Saddle points of the phase function and the contributory index range.

Saddles are the non-zero roots of psi'(w) = 0, i.e. of the entire function
h(w) = w + i a (e^w - 1) - w (e^w - 1)/n.  In the upper half-plane they form
a string with one root in each strip 2 pi (k-1) < Im w < 2 pi k, which is how
the index k is assigned.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .direct import SeriesPoint
from .errors import ConvergenceError, IndexBandError
from .phase import d2psi_raw, dpsi_raw, psi_raw

__all__ = [
    "Saddle",
    "ContributoryRange",
    "initial_guess",
    "newton_root",
    "refine_saddle",
    "saddle_string",
    "heuristic_m",
    "heuristic_k_star",
    "contributory_range",
    "in_band",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Saddle:
    k: int
    w: complex
    residual: float
    psi_at: complex
    psi_dd: complex


@dataclass(frozen=True)
class ContributoryRange:
    """Saddles k_star..m contribute.  ``forward`` maps k to the tangent
    angle of the integration direction when the range came from tracing."""

    k_star: int
    m: int
    method: str
    forward: dict = field(default_factory=dict, compare=False, hash=False)
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        if not 1 <= self.k_star <= self.m:
            raise ValueError(f"invalid contributory range k*={self.k_star}, m={self.m}")
        if self.method not in ("heuristic", "traced"):
            raise ValueError(f"unknown method {self.method!r}")

    @property
    def indices(self) -> range:
        return range(self.k_star, self.m + 1)


def initial_guess(k: int, a: float) -> complex:
    """log((2k-1) pi / a) + i (2k-1) pi, the low-lying saddle estimate."""
    y = (2 * k - 1) * math.pi
    return complex(math.log(y / a), y)


def in_band(k: int, w: complex) -> bool:
    return TWO_PI * (k - 1) < w.imag < TWO_PI * k


def newton_root(start: complex, a: float, inv_n: float, tol: float = 1e-12, max_iter: int = 60) -> complex:
    """Newton on psi'(w) = 0 with up to 10 step halvings when |psi'| grows."""
    w = complex(start)
    try:
        r = abs(dpsi_raw(w, a, inv_n))
        for _ in range(max_iter):
            step = dpsi_raw(w, a, inv_n) / d2psi_raw(w, a)
            for _ in range(11):
                cand = w - step
                rc = abs(dpsi_raw(cand, a, inv_n))
                if rc <= r or not math.isfinite(r):
                    break
                step *= 0.5
            w, r = cand, rc
            if abs(step) <= 4e-16 * abs(w):
                break
    except (ZeroDivisionError, OverflowError, ValueError) as exc:
        raise ConvergenceError(f"Newton broke down from {start}: {exc}") from None
    if not r <= tol:
        raise ConvergenceError(f"Newton from {start} stalled at |psi'| = {r:.3e}")
    return w


def _band_starts(k: int, a: float) -> list[complex]:
    g = initial_guess(k, a)
    ys = np.linspace(TWO_PI * (k - 1) + 0.3, TWO_PI * k - 0.3, 7)
    xs = np.linspace(-4.0, max(8.0, g.real + 4.0), 13)
    return [complex(x, y) for y in ys for x in xs]


def _make_saddle(k: int, w: complex, p: SeriesPoint) -> Saddle:
    inv_n = 1.0 / p.n
    return Saddle(
        k=k,
        w=w,
        residual=abs(dpsi_raw(w, p.a, inv_n)),
        psi_at=psi_raw(w, p.a, inv_n),
        psi_dd=d2psi_raw(w, p.a),
    )


def refine_saddle(k: int, p: SeriesPoint, tol: float = 1e-12, max_iter: int = 60,
                  start: complex | None = None) -> Saddle:
    """Saddle number k, by Newton from the low-lying estimate.

    When that start fails or lands in another index band (it does for the
    first few saddles once a exceeds about pi), Newton is restarted from a
    grid inside the band.
    """
    if tol < 1e-14:
        raise ValueError("tol must be >= 1e-14")
    if max_iter < 8:
        raise ValueError("max_iter must be >= 8")
    if p.n < 1:
        raise ValueError("saddles need n >= 1")
    inv_n = 1.0 / p.n
    first = initial_guess(k, p.a) if start is None else start
    drifted = None
    for z0 in [first, *_band_starts(k, p.a)]:
        try:
            w = newton_root(z0, p.a, inv_n, tol, max_iter)
        except ConvergenceError:
            continue
        if in_band(k, w):
            return _make_saddle(k, w, p)
        drifted = drifted or w
    if drifted is not None:
        raise IndexBandError(f"saddle {k}: every start converged outside the band (e.g. {drifted})")
    raise ConvergenceError(f"saddle {k}: Newton failed from all starts")


def saddle_string(p: SeriesPoint, k_max: int, tol: float = 1e-12) -> list[Saddle]:
    """Saddles k = 1..k_max, strictly increasing in Im w."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    return [refine_saddle(k, p, tol) for k in range(1, k_max + 1)]


def heuristic_m(p: SeriesPoint) -> int:
    """t/(2 pi) + 1/2 rounded, ties up."""
    x = p.t / TWO_PI + 0.5
    return max(1, math.floor(x + 0.5 + 1e-9))


def heuristic_k_star(p: SeriesPoint) -> int:
    return max(1, math.floor((p.a / math.pi + 1.0) / 2.0 + 1e-9))


def contributory_range(p: SeriesPoint, mode: str = "traced") -> ContributoryRange:
    if mode == "heuristic":
        m = heuristic_m(p)
        return ContributoryRange(min(heuristic_k_star(p), m), m, "heuristic")
    if mode == "traced":
        from .tracer import classify

        return classify(p)
    raise ValueError(f"unknown mode {mode!r}")


def saddle_phase_gap(s1: Saddle, s2: Saddle, p: SeriesPoint, steps: int = 400) -> complex:
    """psi(s2) - psi(s1) continued along the straight segment between them.

    The imaginary part is unwrapped step by step, so it is free of the
    2 pi jumps the principal branch would introduce.
    """
    inv_n = 1.0 / p.n
    prev = psi_raw(s1.w, p.a, inv_n)
    acc = 0.0
    for i in range(1, steps + 1):
        w = s1.w + (s2.w - s1.w) * (i / steps)
        cur = psi_raw(w, p.a, inv_n)
        d = cur.imag - prev.imag
        acc += d - TWO_PI * round(d / TWO_PI)
        prev = cur
    return complex(prev.real - s1.psi_at.real, acc)
