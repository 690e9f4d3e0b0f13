"""Dimension thresholds, comparison bounds and nonexistence verdicts for given (p, N)."""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field

from scipy.optimize import brentq

from . import exponents as ex
from .polynomials import evaluate, largest_real_root

S0_TOL = 1e-13
ROOT_TOL = 1e-10
#: Integer-N verdicts closer than this to a threshold are reported as borderline.
GUARD = 1e-6
P_JL4_CAP = 1e6


class ThresholdError(RuntimeError):
    pass


class SingularVerdict(str, enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    NOT_IN_H2LOC = "not_in_H2loc"


def _bisect(f, a: float, b: float, tol: float, max_iter: int = 200) -> float:
    fa = f(a)
    for _ in range(max_iter):
        m = 0.5 * (a + b)
        if b - a <= 2 * tol or m in (a, b):
            return m
        fm = f(m)
        if (fm < 0) == (fa < 0):
            a, fa = m, fm
        else:
            b = m
    raise ThresholdError(f"bisection did not converge on [{a!r}, {b!r}]")


def s0(p: float, tol: float = S0_TOL) -> float:
    """Largest root of L, bracketed between 2 t0 (where L < 0) and a point where L > 0."""
    p = float(p)
    L = ex.poly_L(p)
    lo = 2 * ex.t0(p)
    if not evaluate(L, lo) < 0:
        raise ThresholdError(f"L(2 t0) is not negative at p={p!r}")
    hi = lo + 8 * (1 + math.sqrt(32 * p / (p + 1)))
    for _ in range(64):
        if evaluate(L, hi) > 0:
            break
        hi *= 2
    else:
        raise ThresholdError(f"no upper bracket for s0 at p={p!r}")
    # L is convex on [2 t0, inf), so this sign change is the only root there
    return _bisect(lambda s: evaluate(L, s), lo, hi, tol)


def _scale(p: float) -> float:
    return (p + 1) / (p - 1)


def x0(p: float) -> float:
    """Largest root of H, obtained as (p+1)/(p-1) * s0."""
    return _scale(p) * s0(p)


def x0_direct(p: float, tol: float = ROOT_TOL) -> float | None:
    """Largest root of H by root isolation on H itself (only for p >= 1 + 1e-3)."""
    if p < ex.H_MIN_P:
        return None
    return largest_real_root(ex.poly_H(p), tol)


def dimension_threshold(p: float) -> float:
    return ex.dim_from_x(x0(p))


def cowan_threshold(p: float) -> float:
    p = float(p)
    return 2 + 4 * (p + 1) * ex.t0(p) / (p - 1)


def x1(p: float, tol: float = ROOT_TOL) -> float:
    """Largest root of H_JL4, computed in the rescaled variable and mapped back."""
    p = float(p)
    # the root in s is O(1); scale the tolerance so the x-tolerance is met
    root = largest_real_root(ex.poly_LJL4(p), max(tol / _scale(p), 1e-15))
    if root is None:
        raise ThresholdError(f"H_JL4 has no real root at p={p!r}")
    return _scale(p) * root


def jl4_threshold(p: float, tol: float = ROOT_TOL) -> float:
    return ex.dim_from_x(x1(p, tol))


def singular_instability_margin(p: float, N: int) -> float:
    """p Q4(-4/(p-1)) minus the Hardy-Rellich constant; positive means unstable."""
    p = float(p)
    return p * ex.Q4(ex.singular_exponent(p), N) - ex.hardy_rellich_constant(N)


def classify_singular_solution(p: float, N: int) -> SingularVerdict:
    ex.ProblemParams(p, N).require_whole_space()
    if p <= ex.sobolev_critical(N):
        return SingularVerdict.NOT_IN_H2LOC
    if ex.hardy_rellich_constant(N) < p * ex.Q4(ex.singular_exponent(p), N):
        return SingularVerdict.UNSTABLE
    return SingularVerdict.STABLE


def singular_margin_limit(N: int) -> float:
    """Limit of p Q4(-4/(p-1)) as p -> infinity: 8 (N-2)(N-4)."""
    return 8.0 * (N - 2) * (N - 4)


def p_jl4(N: int, tol: float = 1e-12, cap: float = P_JL4_CAP) -> float | None:
    """Smallest supercritical p at which the singular solution becomes stable.

    Returns None when no switch happens up to ``cap`` and the p -> infinity
    limit of the instability margin is still non-negative.
    """
    ex.ProblemParams(2.0, N).require_whole_space()
    pc = ex.sobolev_critical(N)
    f = lambda p: singular_instability_margin(p, N)
    grid = [pc * (1 + 1e-9)]
    while grid[-1] < cap:
        grid.append(min(cap, 1 + (grid[-1] - 1) * 1.05 + 1e-3))
    prev = grid[0]
    for p in grid[1:]:
        if f(p) <= 0 < f(prev):
            root = brentq(f, prev, p, xtol=tol, rtol=1e-15, maxiter=500)
            return float(root)
        prev = p
    limit = ex.hardy_rellich_constant(N) - singular_margin_limit(N)
    if limit <= 0:
        return None
    raise ThresholdError(
        f"no stability switch found up to p={cap:g} for N={N}, "
        f"although the p -> infinity margin favours stability"
    )


def nonexistence_via_beta(p: float, N: int) -> bool:
    """Whether some beta in [2, N s0/(N-2)) satisfies N < 2 (p+1) beta / (p-1)."""
    ex.ProblemParams(p, N).require_whole_space()
    p = float(p)
    beta_hi = N * s0(p) / (N - 2)
    beta_need = N * (p - 1) / (2 * (p + 1))
    # admissible betas: [2, beta_hi) intersected with (beta_need, inf)
    return max(2.0, beta_need) < beta_hi


@dataclass
class RegularityReport:
    p: float
    N: int
    verdict: str
    integrability_sup: float
    smoothness_lhs: float
    smoothness_rhs: float
    smoothness_criterion: bool
    borderline: bool


def extremal_regularity_report(p: float, N: int) -> RegularityReport:
    """Smoothness verdict for the extremal solution in a bounded domain (N >= 1)."""
    ex.ProblemParams(p, N)
    p = float(p)
    s = s0(p)
    threshold = dimension_threshold(p)
    lhs = N / 4
    rhs = 0.5 * (1 + (p + 1) * s / (p - 1))
    return RegularityReport(
        p=p,
        N=N,
        verdict="smooth" if N < threshold else "unknown",
        integrability_sup=(p - 1) / 2 + (p + 1) * s / 2,
        smoothness_lhs=lhs,
        smoothness_rhs=rhs,
        smoothness_criterion=lhs < rhs,
        borderline=abs(N - threshold) < GUARD,
    )


@dataclass
class Verdicts:
    stable_nonexistence: bool | None
    halfspace_nonexistence: bool | None
    extremal_smooth: bool | None
    singular_solution: str
    cowan_nonexistence: bool | None
    borderline: list = field(default_factory=list)


@dataclass
class ThresholdReport:
    p: float
    t0: float
    s0: float
    x0: float
    dim_threshold: float
    cowan_threshold: float
    x1: float
    jl4_threshold: float
    N: int | None = None
    verdicts: Verdicts | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def _strict_below(N: int, threshold: float, name: str, borderline: list) -> bool | None:
    if abs(N - threshold) < GUARD:
        borderline.append(name)
        return None
    return N < threshold


def threshold_report(p: float, N: int | None = None) -> ThresholdReport:
    params = ex.ProblemParams(p, N)
    p = float(p)
    s = s0(p)
    xz = _scale(p) * s
    xo = x1(p)
    report = ThresholdReport(
        p=p,
        t0=float(ex.t0(p)),
        s0=s,
        x0=xz,
        dim_threshold=ex.dim_from_x(xz),
        cowan_threshold=cowan_threshold(p),
        x1=xo,
        jl4_threshold=ex.dim_from_x(xo),
        N=params.N,
    )
    if N is None:
        return report
    params.require_whole_space()
    borderline: list[str] = []
    whole_space = _strict_below(N, report.dim_threshold, "dim_threshold", borderline)
    report.verdicts = Verdicts(
        stable_nonexistence=whole_space,
        # the half-space statement shares the threshold
        halfspace_nonexistence=whole_space,
        extremal_smooth=whole_space,
        singular_solution=classify_singular_solution(p, N).value,
        cowan_nonexistence=_strict_below(N, report.cowan_threshold, "cowan_threshold", borderline),
        borderline=borderline,
    )
    return report
