"""Discrete Rayleigh quotients for the radial second variation.

For radial φ supported in [r_lo, r_hi] we minimise

    ∫ |Δφ|² r^(N-1) dr  /  p ∫ W φ² r^(N-1) dr

over C¹ piecewise-cubic functions in t = log r.  Writing
φ = exp(-(N-4) t / 2) ψ removes the exponential weights:

    numerator   = ∫ (ψ'' + 2ψ' - c ψ)² dt,   c = N (N-4) / 4
    denominator = ∫ p W(e^t) e^(4t) ψ² dt

so a weight W = K r^-4 gives a constant-coefficient problem whose infimum
over long intervals tends to c² / (p K).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import exponents as ex
from . import thresholds as th


class RayleighError(RuntimeError):
    pass


@dataclass
class RayleighResult:
    min_quotient: float
    coefficients: np.ndarray
    N: int
    p: float
    r_lo: float
    r_hi: float
    basis_size: int
    residual: float

    @property
    def decades(self) -> float:
        return math.log10(self.r_hi / self.r_lo)

    def to_dict(self) -> dict:
        return {
            "min_quotient": self.min_quotient,
            "N": self.N,
            "p": self.p,
            "r_lo": self.r_lo,
            "r_hi": self.r_hi,
            "decades": self.decades,
            "basis_size": self.basis_size,
            "residual": self.residual,
        }


# cubic Hermite shape functions on [0, 1] and their derivatives (per unit length)
def _hermite(xi):
    h = np.stack([
        1 - 3 * xi**2 + 2 * xi**3,
        xi - 2 * xi**2 + xi**3,
        3 * xi**2 - 2 * xi**3,
        -xi**2 + xi**3,
    ])
    d1 = np.stack([-6 * xi + 6 * xi**2, 1 - 4 * xi + 3 * xi**2, 6 * xi - 6 * xi**2, -2 * xi + 3 * xi**2])
    d2 = np.stack([-6 + 12 * xi, -4 + 6 * xi, 6 - 12 * xi, -2 + 6 * xi])
    return h, d1, d2


def _assemble(N: int, p: float, weight, t_lo: float, t_hi: float, n_el: int, n_gauss: int = 8):
    h = (t_hi - t_lo) / n_el
    c = N * (N - 4) / 4.0
    g, gw = np.polynomial.legendre.leggauss(n_gauss)
    xi = 0.5 * (g + 1)
    gw = 0.5 * gw * h
    H, D1, D2 = _hermite(xi)
    # element basis values in t: derivative dofs scaled by h
    scale = np.array([1.0, h, 1.0, h])[:, None]
    B0 = H * scale
    B1 = D1 * scale / h
    B2 = D2 * scale / h**2
    op = B2 + 2 * B1 - c * B0  # shape (4, n_gauss)
    Ke = (op * gw) @ op.T

    n_nodes = n_el + 1
    ndof = 2 * n_nodes
    A = np.zeros((ndof, ndof))
    M = np.zeros((ndof, ndof))
    for e in range(n_el):
        t = t_lo + (e + xi) * h
        w = p * np.asarray(weight(np.exp(t)), dtype=float) * np.exp(4 * t)
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise RayleighError("weight must be finite and non-negative")
        Me = (B0 * (gw * w)) @ B0.T
        idx = slice(2 * e, 2 * e + 4)
        A[idx, idx] += Ke
        M[idx, idx] += Me
    # clamp ψ and ψ' at both ends
    free = np.arange(2, ndof - 2)
    return A[np.ix_(free, free)], M[np.ix_(free, free)]


def rayleigh_stability(
    weight,
    p: float,
    N: int,
    r_lo: float,
    r_hi: float,
    basis_size: int = 512,
) -> RayleighResult:
    """Minimal discrete quotient for a radial weight W(r) (e.g. u^(p-1)).

    A value below 1 exhibits a test function with negative second variation.
    """
    if not 0 < r_lo < r_hi:
        raise ValueError(f"need 0 < r_lo < r_hi, got {r_lo}, {r_hi}")
    if basis_size < 8:
        raise ValueError("basis_size must be at least 8")
    n_el = basis_size // 2 + 1
    A, M = _assemble(N, p, weight, math.log(r_lo), math.log(r_hi), n_el)
    size = A.shape[0]
    # A is positive definite; M only semi-definite, so take the top of M x = μ A x
    try:
        mu, vec = scipy.linalg.eigh(M, A, subset_by_index=[size - 1, size - 1])
    except np.linalg.LinAlgError as exc:
        raise RayleighError(f"discrete numerator is not positive definite: {exc}") from exc
    mu = float(mu[0])
    x = vec[:, 0]
    if mu <= 0:
        return RayleighResult(math.inf, x, N, p, r_lo, r_hi, size, 0.0)
    q = 1.0 / mu
    Ax = A @ x
    residual = float(np.linalg.norm(Ax - q * (M @ x)) / np.linalg.norm(Ax))
    return RayleighResult(q, x, N, p, r_lo, r_hi, size, residual)


def power_weight(coefficient: float):
    """W(r) = coefficient * r^-4."""
    return lambda r: coefficient * np.asarray(r, dtype=float) ** -4


def singular_weight(p: float, N: int):
    """Linearisation weight Q4(-4/(p-1)) |x|^-4 of the singular solution."""
    return power_weight(float(ex.Q4(ex.singular_exponent(p), N)))


def hardy_rellich_quotient(N: int, decades: float, basis_size: int = 512) -> RayleighResult:
    """Quotient for W = r^-4 with p = 1, centred at r = 1."""
    half = 10 ** (decades / 2)
    return rayleigh_stability(power_weight(1.0), 1.0, N, 1 / half, half, basis_size)


def weight_from_solution(sol):
    """u^(p-1) interpolated linearly in log-log coordinates; zero off the grid."""
    lr = np.log(sol.r)
    lw = (sol.p - 1) * np.log(np.clip(sol.u, 1e-300, None))

    def w(r):
        r = np.asarray(r, dtype=float)
        out = np.exp(np.interp(np.log(r), lr, lw))
        return np.where((r >= sol.r[0]) & (r <= sol.r[-1]) & (np.interp(r, sol.r, sol.u) > 0), out, 0.0)

    return w


@dataclass
class ConsistencyReport:
    p: float
    N: int
    algebraic_ratio: float
    classified: str
    decades: list = field(default_factory=list)
    quotients: list = field(default_factory=list)
    extrapolated: float = math.nan
    verdict: str = ""
    verdict_basis: str = ""
    agrees: bool = False

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _extrapolate(decades, quotients) -> float:
    # the clamped-mode correction scales like 1 / T^2 with T = log of the domain ratio
    T = np.asarray(decades, dtype=float) * math.log(10)
    X = np.stack([np.ones_like(T), T**-2], axis=1)
    coef, *_ = np.linalg.lstsq(X, np.asarray(quotients, dtype=float), rcond=None)
    return float(coef[0])


def stability_consistency(
    p: float,
    N: int,
    decades=(2, 3, 4, 5, 6),
    basis_per_decade: int = 96,
) -> ConsistencyReport:
    """Compare the discrete quotient for the singular weight against the algebraic test.

    An unstable verdict is sound (a finite-domain witness); a stable verdict
    rests on the extrapolation of the quotient trajectory.
    """
    if not p > ex.sobolev_critical(N):
        raise ValueError("stability_consistency needs p above (N+4)/(N-4)")
    classified = th.classify_singular_solution(p, N).value
    q4 = float(ex.Q4(ex.singular_exponent(p), N))
    report = ConsistencyReport(
        p=p, N=N, algebraic_ratio=float(ex.hardy_rellich_constant(N)) / (p * q4), classified=classified
    )
    w = singular_weight(p, N)
    for d in decades:
        half = 10 ** (d / 2)
        basis = max(16, int(round(basis_per_decade * d / 2)) * 2)
        res = rayleigh_stability(w, p, N, 1 / half, half, basis)
        report.decades.append(float(d))
        report.quotients.append(res.min_quotient)
    report.extrapolated = _extrapolate(report.decades, report.quotients)
    if min(report.quotients) < 1:
        report.verdict, report.verdict_basis = "unstable", "finite-domain witness"
    elif report.extrapolated < 1:
        report.verdict, report.verdict_basis = "unstable", "extrapolated"
    else:
        report.verdict, report.verdict_basis = "stable", "extrapolated (evidence only)"
    report.agrees = report.verdict == classified
    return report
