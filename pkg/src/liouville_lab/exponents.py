"""Closed-form exponents, constants and polynomials in (p, N).

Everything here is a direct formula.  In extended precision mode (see
``liouville_lab.precision``) the formulas return mpmath numbers and the
polynomials carry mpmath coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import precision as _prec
from .polynomials import Poly, evaluate

#: Below this p the quartic H is not built by the threshold code; its
#: coefficients grow like (p - 1)^-4.
H_MIN_P = 1.0 + 1e-3


class DomainError(ValueError):
    """A formula was called outside the range where it is defined."""


@dataclass(frozen=True)
class ProblemParams:
    p: float
    N: int | None = None

    def __post_init__(self):
        if not self.p > 1:
            raise DomainError(f"p must exceed 1, got {self.p}")
        if self.N is not None:
            if int(self.N) != self.N or self.N < 1:
                raise DomainError(f"N must be a positive integer, got {self.N}")
            object.__setattr__(self, "N", int(self.N))

    @property
    def whole_space(self) -> bool:
        """True when N is large enough for the whole-space statements (N >= 5)."""
        return self.N is not None and self.N >= 5

    def require_whole_space(self) -> None:
        if not self.whole_space:
            raise DomainError(f"whole-space formulas need N >= 5, got N={self.N}")


def _check_p(p) -> None:
    if not p > 1:
        raise DomainError(f"p must exceed 1, got {p}")


def _check_dim(N) -> None:
    if N <= 4:
        raise DomainError(f"N must be at least 5, got {N}")


def sobolev_critical(N: int):
    """(N + 4) / (N - 4)."""
    _check_dim(N)
    N = _prec.num(N)
    return (N + 4) / (N - 4)


def t0(p):
    """Cowan's exponent sqrt(b) + sqrt(b - sqrt(b)) with b = 2p/(p+1)."""
    _check_p(p)
    p = _prec.num(p)
    b = 2 * p / (p + 1)
    rb = _prec.sqrt(b)
    return rb + _prec.sqrt(b - rb)


def t0_limit():
    """Value of t0 as p -> infinity."""
    two = _prec.num(2)
    return _prec.sqrt(two) + _prec.sqrt(two - _prec.sqrt(two))


def poly_L(p) -> Poly:
    _check_p(p)
    p = _prec.num(p)
    return Poly((
        -64 * p / (p + 1) ** 2,
        32 * p * (p + 3) / (p + 1) ** 2,
        -32 * p / (p + 1),
        _prec.num(0),
        _prec.num(1),
    ))


def poly_H(p) -> Poly:
    """H(x) = ((p+1)/(p-1))^4 L((p-1) x / (p+1)), built from its own coefficients."""
    _check_p(p)
    p = _prec.num(p)
    d = p - 1
    return Poly((
        -64 * p * (p + 1) ** 2 / d ** 4,
        32 * p * (p + 1) * (p + 3) / d ** 3,
        -32 * p * (p + 1) / d ** 2,
        _prec.num(0),
        _prec.num(1),
    ))


def poly_HJL4(p) -> Poly:
    """(x^2 - 1)^2 plus the lower-order part of H, expanded."""
    h = poly_H(p).coeffs
    return Poly((h[0] + 1, h[1], h[2] - 2, h[3], h[4]))


def poly_LJL4(p) -> Poly:
    """H_JL4 in the rescaled variable s = (p-1) x / (p+1), divided by ((p+1)/(p-1))^4.

    Well conditioned for p close to 1, unlike ``poly_HJL4`` itself.
    """
    L = poly_L(p)
    p = _prec.num(p)
    k = (p - 1) / (p + 1)
    c = L.coeffs
    return Poly((c[0] + k ** 4, c[1], c[2] - 2 * k ** 2, c[3], c[4]))


J_COEFFS = (625, -3844, 4262, -1284, -15)


def poly_J() -> Poly:
    """J(p) = (p-1)^4 H(5), as an integer quartic in p."""
    return Poly(J_COEFFS)


def Q4(m, N):
    """m (m - 2)(m + N - 2)(m + N - 4)."""
    return m * (m - 2) * (m + N - 2) * (m + N - 4)


def singular_exponent(p):
    """Radial power -4/(p-1) of the singular solution |x|^(-4/(p-1))."""
    _check_p(p)
    p = _prec.num(p)
    return -4 / (p - 1)


def hardy_rellich_constant(N: int):
    """Best constant N^2 (N-4)^2 / 16."""
    _check_dim(N)
    N = _prec.num(N)
    return N ** 2 * (N - 4) ** 2 / 16


def x_from_dim(N):
    return (N - 2) / 2


def dim_from_x(x):
    return 2 + 2 * x


def coupling_q_from_r(r, p):
    """Return (q, q + 1) with 2q = (p+1) r + p - 1."""
    q = ((p + 1) * r + p - 1) / 2
    return q, (p + 1) * (r + 1) / 2


def a1(q, p):
    return 4 * q * _prec.sqrt(p) / (q + 1) ** 2


def a2(r, p):
    return 4 * r * _prec.sqrt(p) / (r + 1) ** 2


def stability_product_condition(s, p) -> bool:
    """Whether a1 * a2 > 1 for r = s - 1 and q fixed by the coupling."""
    if s < 2:
        raise DomainError(f"s must be at least 2, got {s}")
    _check_p(p)
    s, p = _prec.num(s), _prec.num(p)
    r = s - 1
    q, _ = coupling_q_from_r(r, p)
    return bool(a1(q, p) * a2(r, p) > 1)


def L_negative(s, p) -> bool:
    """Sign test on L itself; independent route to ``stability_product_condition``."""
    return bool(evaluate(poly_L(p), _prec.num(s)) < 0)
