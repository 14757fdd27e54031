"""Steepest-descent paths through the saddles, endpoint classification and
Stokes detection.

A path is integrated along the unit-speed flow dw/dtau = -conj(psi')/|psi'|
with RK4.  After every step a Newton correction along the level-set normal
puts the continued Im psi back on the saddle value.  Im psi is continued
by unwrapping increments, so crossing a branch cut of either logarithm
does not show up as a jump.

Endpoints at 2 pi i k' carry a sheet label.  The integrand is multivalued
only through w^{s-1}, i.e. around the origin, so two paths reaching the
same singularity meet on the same sheet only when their continued arg w
agree there.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .direct import SeriesPoint
from .errors import DegenerateSaddleError, OutOfRangeError, TracerError
from .phase import dpsi_raw, log1m_exp_neg
from .saddles import (
    ContributoryRange,
    Saddle,
    heuristic_m,
    refine_saddle,
    saddle_phase_gap,
    saddle_string,
)

__all__ = [
    "Endpoint",
    "PathPoint",
    "DescentPath",
    "descent_directions",
    "trace",
    "classify",
    "classify_paths",
    "detect_stokes",
]

TWO_PI = 2.0 * math.pi
CAPTURE_RADIUS = 0.05
SADDLE_HIT_RADIUS = 0.02
PROJECTION_TOL = 1e-10
MONOTONE_TOL = 1e-9


def _wrap(x: float) -> float:
    return x - TWO_PI * round(x / TWO_PI)


@dataclass(frozen=True)
class Endpoint:
    """kind is one of singularity, escape, saddle_hit, budget_exhausted."""

    kind: str
    index: int | None = None
    sheet: int = 0

    def __str__(self) -> str:
        if self.kind == "singularity":
            return f"singularity({self.index}" + (f", sheet {self.sheet})" if self.sheet else ")")
        if self.kind == "saddle_hit":
            return f"saddle_hit({self.index})"
        return self.kind


@dataclass(frozen=True)
class PathPoint:
    tau: float
    w: complex
    re_psi: float
    im_psi: float


@dataclass(frozen=True)
class DescentPath:
    k: int
    direction: float
    points: tuple[PathPoint, ...]
    endpoint: Endpoint
    winding: int
    arg_change: float

    @property
    def im_drift(self) -> float:
        ref = self.points[0].im_psi
        return max(abs(q.im_psi - ref) for q in self.points)


def descent_directions(s: Saddle) -> tuple[float, float]:
    """The two downhill tangent angles at a saddle."""
    if s.psi_dd == 0 or not abs(s.psi_dd) > 0:
        raise DegenerateSaddleError(f"psi'' vanishes at saddle {s.k}")
    th = 0.5 * (math.pi - cmath.phase(s.psi_dd))
    return th, th + math.pi


def canonical_direction(s: Saddle) -> float:
    """The descent angle pointing into increasing Im w, in (0, pi]."""
    th, _ = descent_directions(s)
    return th if math.sin(th) > 0 else th + math.pi


def _nearest_singularity(w: complex) -> tuple[int, float]:
    k = round(w.imag / TWO_PI)
    return k, abs(w - complex(0.0, TWO_PI * k))


class _Level:
    """psi continued along a path: arg w and Im log(1 - e^{-w}) are
    unwrapped increment by increment, so neither logarithm's branch cut
    produces a jump in Re psi or Im psi."""

    def __init__(self, w: complex, im_psi: float, a: float, inv_n: float):
        self.a, self.inv_n = a, inv_n
        self.arg = cmath.phase(w)
        lg = log1m_exp_neg(w)
        self.lg_principal = lg.imag
        self.lg_cont = im_psi - a * math.log(abs(w)) + w.imag * inv_n
        self.re = lg.real - a * self.arg - w.real * inv_n

    def probe(self, w: complex) -> tuple[float, float, float, float]:
        """(Re psi, Im psi, arg w, Im log(1 - e^{-w})), all continued."""
        arg = self.arg + _wrap(cmath.phase(w) - self.arg)
        lg = log1m_exp_neg(w)
        lgc = self.lg_cont + _wrap(lg.imag - self.lg_principal)
        re = lg.real - self.a * arg - w.real * self.inv_n
        im = lgc + self.a * math.log(abs(w)) - w.imag * self.inv_n
        return re, im, arg, lgc

    def accept(self, w: complex, state: tuple[float, float, float, float]) -> None:
        self.re, _, self.arg, self.lg_cont = state
        self.lg_principal = log1m_exp_neg(w).imag


def _project(w: complex, level: _Level, target: float, a: float, inv_n: float):
    # Newton along i*conj(psi')/|psi'|, the direction that changes Im psi only
    state = level.probe(w)
    for _ in range(8):
        err = state[1] - target
        if abs(err) <= PROJECTION_TOL:
            return w, state
        d = dpsi_raw(w, a, inv_n)
        w = w - 1j * err * d.conjugate() / (abs(d) ** 2)
        state = level.probe(w)
    if abs(state[1] - target) <= PROJECTION_TOL:
        return w, state
    raise TracerError(f"projection could not restore Im psi near w = {w} (error {state[1] - target:.2e})")


def trace(s: Saddle, p: SeriesPoint, direction: float, step: float = 0.05, budget: int = 20_000,
          others: tuple[Saddle, ...] | list[Saddle] = (), escape_re: float | None = None) -> DescentPath:
    """Descent path from saddle s leaving along the tangent angle ``direction``."""
    if not 1e-4 <= step <= 0.1:
        raise ValueError("step must lie in [1e-4, 0.1]")
    if budget < 10_000:
        raise ValueError("budget must be >= 10000")
    a, inv_n = p.a, 1.0 / p.n
    target = s.psi_at.imag
    x_esc = max(20.0, s.w.real + 10.0) if escape_re is None else escape_re
    rivals = [o for o in others if o.k != s.k]

    level = _Level(s.w, target, a, inv_n)
    w, state = _project(s.w + step * cmath.exp(1j * direction), level, target, a, inv_n)
    if not state[0] < level.re:
        raise TracerError(f"direction {direction:.4f} is not downhill at saddle {s.k}")
    arg0 = level.arg
    level.accept(w, state)
    tau = step
    pts = [PathPoint(0.0, s.w, s.psi_at.real, target), PathPoint(tau, w, state[0], state[1])]

    def flow(z: complex) -> complex:
        d = dpsi_raw(z, a, inv_n)
        return -d.conjugate() / abs(d)

    endpoint = Endpoint("budget_exhausted")
    for _ in range(budget):
        ks, dist = _nearest_singularity(w)
        if dist < CAPTURE_RADIUS:
            sheet = 0
            if ks != 0:
                sheet = round((level.arg - math.copysign(0.5 * math.pi, ks)) / TWO_PI)
            endpoint = Endpoint("singularity", ks, sheet)
            break
        if w.real > x_esc:
            endpoint = Endpoint("escape")
            break
        hit = next((o for o in rivals if abs(w - o.w) < SADDLE_HIT_RADIUS), None)
        if hit is not None:
            endpoint = Endpoint("saddle_hit", hit.k)
            break
        h = min(step, 0.2 * dist)
        if rivals:
            h = min(h, max(0.25 * min(abs(w - o.w) for o in rivals), 0.005))
        while True:
            k1 = flow(w)
            k2 = flow(w + 0.5 * h * k1)
            k3 = flow(w + 0.5 * h * k2)
            k4 = flow(w + h * k3)
            cand = w + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            try:
                cand, new = _project(cand, level, target, a, inv_n)
            except TracerError:
                new = None
            if new is not None and new[0] < level.re + MONOTONE_TOL:
                break
            h *= 0.5
            if h < 1e-9:
                raise TracerError(f"step failure at w = {w} on the path from saddle {s.k}")
        level.accept(cand, new)
        w = cand
        tau += h
        pts.append(PathPoint(tau, w, new[0], new[1]))
    turned = level.arg - arg0
    return DescentPath(
        k=s.k,
        direction=direction,
        points=tuple(pts),
        endpoint=endpoint,
        winding=round(turned / TWO_PI),
        arg_change=turned,
    )


def _trace_both(s: Saddle, p: SeriesPoint, others, step: float, budget: int, escape_re: float | None):
    return tuple(trace(s, p, th, step, budget, others, escape_re) for th in descent_directions(s))


def classify_paths(p: SeriesPoint, k_max: int | None = None, step: float = 0.05,
                   budget: int = 20_000) -> tuple[ContributoryRange, dict[int, tuple[DescentPath, DescentPath]]]:
    """Contributory range from the traced topology, plus the traced paths.

    Saddles are traced upward from k = 1; m is the first saddle with an
    escaping path.  k* follows from walking down the chain: each saddle's
    lower endpoint must be an endpoint of a lower saddle's path on the
    principal sheet.  The walk stops at the origin, at an endpoint on
    another sheet, or where no saddle links up.
    """
    cap = k_max if k_max is not None else heuristic_m(p) + 4
    saddles = saddle_string(p, cap + 1)
    paths: dict[int, tuple[DescentPath, DescentPath]] = {}
    m = None
    k = 1
    while m is None:
        if k > cap:
            if k_max is not None or cap > 4 * heuristic_m(p) + 20:
                raise TracerError(f"no escaping descent path among saddles 1..{cap}")
            cap = 2 * cap
            saddles = saddles + [refine_saddle(j, p) for j in range(len(saddles) + 1, cap + 2)]
        s = saddles[k - 1]
        near = saddles[max(0, k - 3):k + 2]
        paths[k] = _trace_both(s, p, near, step, budget, None)
        if any(q.endpoint.kind == "escape" for q in paths[k]):
            m = k
        k += 1

    flags: list[str] = []
    for q in (x for pair in paths.values() for x in pair):
        if q.endpoint.kind == "budget_exhausted":
            raise TracerError(f"descent path from saddle {q.k} exhausted its step budget")
        if q.endpoint.kind == "saddle_hit" and "stokes_warning" not in flags:
            flags.append("stokes_warning")

    up, down = paths[m]
    if up.endpoint.kind != "escape":
        up, down = down, up
    if down.endpoint.kind == "escape":
        flags.append("double_escape")
    forward = {m: up.direction}
    cur, low = m, down
    while True:
        e = low.endpoint
        # a lower end reached only after winding round the origin lies on
        # another sheet of w^{s-1} and cannot be where a lower saddle's
        # path comes up from
        if e.kind != "singularity" or e.index == 0 or e.sheet != 0:
            break
        link = None
        for j in range(cur - 1, 0, -1):
            hits = [q for q in paths[j] if q.endpoint == e]
            if hits:
                link = j, hits[0]
                break
        if link is None:
            break
        j, hit = link
        forward[j] = hit.direction
        low = paths[j][1] if paths[j][0] is hit else paths[j][0]
        cur = j
    return ContributoryRange(cur, m, "traced", forward, tuple(flags)), paths


def classify(p: SeriesPoint, k_max: int | None = None) -> ContributoryRange:
    return classify_paths(p, k_max)[0]


def _traced_m(p: SeriesPoint) -> int:
    return classify_paths(p)[0].m


def _gap(n: int, a: float, sigma: float, k: int, starts: dict) -> float:
    p = SeriesPoint(n, a, sigma)
    s1 = refine_saddle(k, p, start=starts.get(k))
    s2 = refine_saddle(k + 1, p, start=starts.get(k + 1))
    starts[k], starts[k + 1] = s1.w, s2.w
    return saddle_phase_gap(s1, s2, p).imag


def detect_stokes(p_base: SeriesPoint, a_lo: float, a_hi: float, tol: float = 1e-10) -> float | None:
    """Value a* in [a_lo, a_hi] where the top two contributory saddles have
    equal continued Im psi, or None.

    The pair (m-1, m) is taken with m from the upper end of the interval,
    then from the lower end.  The crossing is located by bisection.  A jump
    of m that no such crossing explains is reported as an error.
    """
    if not a_lo < a_hi:
        raise ValueError("need a_lo < a_hi")
    n, sigma = p_base.n, p_base.sigma
    m_lo = _traced_m(SeriesPoint(n, a_lo, sigma))
    m_hi = _traced_m(SeriesPoint(n, a_hi, sigma))
    if abs(m_hi - m_lo) > 1:
        raise OutOfRangeError(f"m jumps from {m_lo} to {m_hi} inside [{a_lo}, {a_hi}]; narrow the interval")
    for m in dict.fromkeys((m_hi, m_lo)):
        k = m - 1
        if k < 1:
            continue
        starts: dict = {}
        f_lo = _gap(n, a_lo, sigma, k, starts)
        f_hi = _gap(n, a_hi, sigma, k, dict(starts))
        if f_lo == 0:
            return a_lo
        if (f_lo > 0) == (f_hi > 0):
            continue
        lo, hi = a_lo, a_hi
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            f = _gap(n, mid, sigma, k, starts)
            if (f > 0) == (f_lo > 0):
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)
    if m_lo != m_hi:
        lo, hi = a_lo, a_hi
        while hi - lo > 1e-3:
            mid = 0.5 * (lo + hi)
            if _traced_m(SeriesPoint(n, mid, sigma)) == m_lo:
                lo = mid
            else:
                hi = mid
        raise OutOfRangeError(
            f"m changes from {m_lo} to {m_hi} near a = {0.5 * (lo + hi):.4f} without an equal-phase crossing"
        )
    return None
