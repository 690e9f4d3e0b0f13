"""Radial profiles of the system -Δu = v, -Δv = u^p by shooting from the origin.

With r = |x| the system reads

    u'' + (N-1)/r u' = -v,    v'' + (N-1)/r v' = -u^p,

normalised by u(0) = 1; the free datum is a = v(0).  Integration starts at a
small radius from a four-term series because of the 1/r terms.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import solve_ivp

from . import exponents as ex

REACHED_RMAX = "reached_rmax"
U_CROSSED_ZERO = "u_crossed_zero"
V_CROSSED_ZERO = "v_crossed_zero"
BLOWUP = "blowup"
EVENTS = (REACHED_RMAX, U_CROSSED_ZERO, V_CROSSED_ZERO, BLOWUP)

CSV_COLUMNS = ("r", "u", "du", "v", "dv")


class IntegrationError(RuntimeError):
    def __init__(self, message: str, radius: float):
        super().__init__(f"{message} (at r={radius!r})")
        self.radius = radius


class BracketingError(RuntimeError):
    def __init__(self, message: str, events: tuple):
        super().__init__(f"{message}; events at bracket ends: {events}")
        self.events = events


class InsufficientDataError(ValueError):
    pass


@dataclass(frozen=True)
class IntegrationControls:
    rtol: float = 1e-12
    atol: float = 1e-30
    r_start: float = 1e-4
    n_out: int = 4000
    blowup: float = 1e12
    method: str = "DOP853"


@dataclass
class RadialSolution:
    p: float
    N: int
    a: float
    r: np.ndarray
    u: np.ndarray
    du: np.ndarray
    v: np.ndarray
    dv: np.ndarray
    event: str
    event_radius: float

    @property
    def r_start(self) -> float:
        return float(self.r[0])

    def restrict(self, r_hi: float) -> "RadialSolution":
        """Profile on r <= r_hi; marked as reaching its (new) end radius."""
        if r_hi >= self.event_radius:
            return self
        keep = self.r <= r_hi
        return replace(
            self,
            r=self.r[keep], u=self.u[keep], du=self.du[keep], v=self.v[keep], dv=self.dv[keep],
            event=REACHED_RMAX, event_radius=float(self.r[keep][-1]),
        )

    def summary(self) -> dict:
        return {
            "p": self.p,
            "N": self.N,
            "a": self.a,
            "event": self.event,
            "event_radius": self.event_radius,
            "points": int(self.r.size),
            "u_end": float(self.u[-1]),
            "v_end": float(self.v[-1]),
        }

    def to_csv(self, fh=None) -> str | None:
        """Write columns r,u,du,v,dv; return the text when no file handle is given."""
        own = fh is None
        out = io.StringIO() if own else fh
        w = csv.writer(out, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in zip(self.r, self.u, self.du, self.v, self.dv):
            w.writerow([f"{x:.12g}" for x in row])
        return out.getvalue() if own else None


def series_start(p: float, N: int, a: float, r: float) -> list[float]:
    """u, u', v, v' at small r from the expansion about the origin.

    Uses Δ(r^2) = 2N and Δ(r^4) = (4N + 8) r^2.
    """
    c = 8.0 * N * (N + 2)
    return [
        1 - a * r**2 / (2 * N) + r**4 / c,
        -a * r / N + 4 * r**3 / c,
        a - r**2 / (2 * N) + p * a * r**4 / c,
        -r / N + 4 * p * a * r**3 / c,
    ]


def _rhs(p: float, N: int):
    k = N - 1

    def f(r, y):
        u, du, v, dv = y
        up = math.copysign(abs(u) ** p, u)
        return [du, -v - k / r * du, dv, -up - k / r * dv]

    return f


def integrate(
    p: float, N: int, a: float, r_max: float, controls: IntegrationControls = IntegrationControls()
) -> RadialSolution:
    if not p > 1 or N < 5 or not r_max > 0:
        raise ValueError(f"need p > 1, N >= 5, r_max > 0; got p={p}, N={N}, r_max={r_max}")
    r0 = min(controls.r_start, 0.5 * r_max)
    y0 = series_start(p, N, a, r0)
    if y0[0] <= 0 or y0[2] <= 0:
        event = U_CROSSED_ZERO if y0[0] <= 0 else V_CROSSED_ZERO
        cols = [np.array([v]) for v in y0]
        return RadialSolution(p, N, a, np.array([r0]), *cols, event=event, event_radius=r0)

    def hit_u(r, y):
        return y[0]

    def hit_v(r, y):
        return y[2]

    def hit_blowup(r, y):
        return controls.blowup - abs(y[0])

    for e in (hit_u, hit_v, hit_blowup):
        e.terminal = True
        e.direction = -1

    sol = solve_ivp(
        _rhs(p, N), (r0, r_max), y0, method=controls.method,
        rtol=controls.rtol, atol=controls.atol,
        events=(hit_u, hit_v, hit_blowup), dense_output=True,
    )
    if sol.status == -1:
        raise IntegrationError(f"integration failed: {sol.message}", float(sol.t[-1]))
    r_end = float(sol.t[-1])
    event = REACHED_RMAX
    for name, hits in zip((U_CROSSED_ZERO, V_CROSSED_ZERO, BLOWUP), sol.t_events):
        if len(hits):
            event, r_end = name, float(hits[0])
            break
    r = np.geomspace(r0, r_end, max(controls.n_out, 2))
    y = sol.sol(r)
    if event == U_CROSSED_ZERO:
        y[0, -1] = min(y[0, -1], 0.0)
    elif event == V_CROSSED_ZERO:
        y[2, -1] = min(y[2, -1], 0.0)
    return RadialSolution(p, N, a, r, y[0], y[1], y[2], y[3], event=event, event_radius=r_end)


@dataclass
class ShootingResult:
    a_star: float
    bracket: tuple
    bracket_events: tuple
    solution: RadialSolution
    trusted_radius: float
    history: list = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "a_star": self.a_star,
            "bracket": list(self.bracket),
            "bracket_events": list(self.bracket_events),
            "event": self.solution.event,
            "event_radius": self.solution.event_radius,
            "trusted_radius": self.trusted_radius,
            "iterations": len(self.history),
        }


def _agreement_radius(s1: RadialSolution, s2: RadialSolution, rel: float) -> float:
    """Largest radius up to which the two profiles agree to ``rel`` in u and v."""
    r_end = min(s1.event_radius, s2.event_radius)
    r = np.geomspace(max(s1.r_start, s2.r_start), r_end, 4000)
    u1, u2 = np.interp(r, s1.r, s1.u), np.interp(r, s2.r, s2.u)
    v1, v2 = np.interp(r, s1.r, s1.v), np.interp(r, s2.r, s2.v)
    scale_u = np.maximum(np.abs(u1), np.abs(u2))
    scale_v = np.maximum(np.abs(v1), np.abs(v2))
    bad = (np.abs(u1 - u2) > rel * scale_u) | (np.abs(v1 - v2) > rel * scale_v)
    if not bad.any():
        return float(r_end)
    first = int(np.argmax(bad))
    return float(r[max(first - 1, 0)])


def shoot(
    p: float,
    N: int,
    tol: float = 1e-13,
    bracket: tuple = (0.0, 1e3),
    r_max: float = 1e3,
    controls: IntegrationControls = IntegrationControls(),
    agreement: float = 1e-3,
    max_iter: int = 200,
) -> ShootingResult:
    """Bisect on a = v(0) between the two observed termination classes."""
    if not p > ex.sobolev_critical(N):
        raise ValueError(
            f"shooting needs p above (N+4)/(N-4) = {float(ex.sobolev_critical(N)):.6g}, got p={p}"
        )
    lo, hi = map(float, bracket)
    s_lo = integrate(p, N, lo, r_max, controls)
    s_hi = integrate(p, N, hi, r_max, controls)
    if s_lo.event == s_hi.event:
        raise BracketingError("bracket ends terminate the same way", (s_lo.event, s_hi.event))
    # orientation is read off the endpoints, not assumed
    lo_class = s_lo.event
    history = []
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        s_mid = integrate(p, N, mid, r_max, controls)
        history.append((mid, s_mid.event, s_mid.event_radius))
        if s_mid.event == lo_class:
            lo, s_lo = mid, s_mid
        else:
            hi, s_hi = mid, s_mid
    deepest = max((s_lo, s_hi), key=lambda s: s.event_radius)
    return ShootingResult(
        a_star=0.5 * (lo + hi),
        bracket=(lo, hi),
        bracket_events=(s_lo.event, s_hi.event),
        solution=deepest,
        trusted_radius=_agreement_radius(s_lo, s_hi, agreement),
        history=history,
    )


def _last_decade(sol: RadialSolution, min_points: int = 10):
    r_end = sol.r[-1]
    keep = sol.r >= r_end / 10
    if keep.sum() < min_points:
        raise InsufficientDataError(
            f"only {int(keep.sum())} points in the last decade (need {min_points})"
        )
    r, u = sol.r[keep], sol.u[keep]
    if np.any(u <= 0):
        raise InsufficientDataError("u is not positive over the last decade")
    return r, u


def tail_exponent(sol: RadialSolution) -> float:
    """Least-squares slope of log u against log r over the last decade of radii."""
    r, u = _last_decade(sol)
    slope, _ = np.polyfit(np.log(r), np.log(u), 1)
    return float(slope)


def tail_amplitude(sol: RadialSolution) -> float:
    """Geometric mean of u r^(4/(p-1)) over the last decade of radii."""
    r, u = _last_decade(sol)
    return float(np.exp(np.mean(np.log(u) + 4 / (sol.p - 1) * np.log(r))))


@dataclass
class SoupletResult:
    max_violation: float
    min_v: float
    max_v: float


def souplet_check(sol: RadialSolution) -> SoupletResult:
    """max of sqrt(2/(p+1)) u^((p+1)/2) - v over the grid, with the range of v."""
    if np.any(sol.u < 0):
        raise ValueError("souplet_check needs u >= 0 on the stored grid")
    beta = math.sqrt(2 / (sol.p + 1))
    gap = beta * sol.u ** ((sol.p + 1) / 2) - sol.v
    return SoupletResult(float(gap.max()), float(sol.v.min()), float(sol.v.max()))


def cumulative_mass(sol: RadialSolution) -> np.ndarray:
    """Running integral of (v^2 + u^(p+1)) r^(N-1) dr (sphere area omitted)."""
    f = (sol.v**2 + np.abs(sol.u) ** (sol.p + 1)) * sol.r ** (sol.N - 1)
    steps = 0.5 * (f[1:] + f[:-1]) * np.diff(sol.r)
    return np.concatenate(([0.0], np.cumsum(steps)))


def mass_growth_exponent(sol: RadialSolution) -> float:
    """Log-log slope of the cumulative mass over the last decade of radii."""
    r, _ = _last_decade(sol)
    m = cumulative_mass(sol)[sol.r >= r[0]]
    slope, _ = np.polyfit(np.log(r), np.log(m), 1)
    return float(slope)


def mass_growth_bound(p: float, N: int) -> float:
    """Exponent N - 4 - 8/(p-1) bounding the growth of the mass integral."""
    return N - 4 - 8 / (p - 1)
