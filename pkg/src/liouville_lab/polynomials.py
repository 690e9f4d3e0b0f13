"""Dense univariate polynomials and certified real-root isolation.

Root counting uses a Sturm sequence built in exact rational arithmetic from
the (float) coefficients, so the number of distinct real roots reported is
exact for the polynomial as stored.  Locations are then refined by
bisection to the requested absolute tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

MAX_DEGREE = 8
DEFAULT_TOL = 1e-10
MAX_ITER = 400


class RootIsolationError(RuntimeError):
    """Raised when a root enclosure cannot be shrunk to the requested width."""

    def __init__(self, message: str, interval: tuple[float, float]):
        super().__init__(f"{message} on interval [{interval[0]!r}, {interval[1]!r}]")
        self.interval = interval


@dataclass(frozen=True)
class Poly:
    """Real polynomial, coefficients in ascending degree order.

    Trailing zero coefficients are stripped so that the leading coefficient
    is nonzero.  The zero polynomial is stored as an empty tuple.
    """

    coeffs: tuple = ()

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        if len(c) - 1 > MAX_DEGREE:
            raise ValueError(f"degree {len(c) - 1} exceeds {MAX_DEGREE}")
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_roots(cls, roots: Sequence[float]) -> "Poly":
        out = cls((1.0,))
        for r in roots:
            out = out * cls((-r, 1.0))
        return out

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        return evaluate(self, x)

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return Poly(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return Poly(tuple(c * other for c in self.coeffs))
        if self.is_zero() or other.is_zero():
            return Poly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(tuple(out))

    __rmul__ = __mul__

    def scale(self) -> float:
        """Largest absolute coefficient (1 for the zero polynomial)."""
        if not self.coeffs:
            return 1.0
        return max(abs(float(c)) for c in self.coeffs)

    def normalized(self) -> "Poly":
        """Float copy divided by the power of two nearest the largest coefficient.

        Power-of-two scaling is exact, so roots (and multiplicities) survive.
        """
        _, e = math.frexp(self.scale())
        return Poly(tuple(math.ldexp(float(c), -e) for c in self.coeffs))

    def __str__(self) -> str:
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            terms.append(f"{float(c):+g}{'*' if mono else ''}{mono}")
        return " ".join(terms) if terms else "0"


@dataclass(frozen=True)
class Root:
    location: float
    half_width: float
    multiple: bool = False


@dataclass(frozen=True)
class RootSet:
    roots: tuple = ()
    method: str = "isolation+refinement"
    certified_count: int = 0

    @property
    def locations(self) -> list[float]:
        return [r.location for r in self.roots]

    def __len__(self) -> int:
        return len(self.roots)


def evaluate(poly: Poly, x):
    """Horner evaluation; works for floats, Fractions, mpmath numbers and arrays."""
    acc = 0
    for c in reversed(poly.coeffs):
        acc = acc * x + c
    return acc


def derivative(poly: Poly) -> Poly:
    return Poly(tuple(k * c for k, c in enumerate(poly.coeffs) if k > 0))


# -- exact Sturm machinery -------------------------------------------------

def _to_fraction(c) -> Fraction:
    if isinstance(c, mpmath.mpf):
        # exact binary value of the mpf: mantissa * 2**exponent
        sign, man, exp, _ = c._mpf_
        value = Fraction(int(man)) * Fraction(2) ** int(exp)
        return -value if sign else value
    return Fraction(c) if isinstance(c, (int, Fraction)) else Fraction(float(c))


def _exact(poly: Poly) -> list[Fraction]:
    return [_to_fraction(c) for c in poly.coeffs]


def _rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        factor = a[-1] / b[-1]
        shift = len(a) - 1 - db
        for i, bc in enumerate(b):
            a[shift + i] -= factor * bc
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def sturm_sequence(poly: Poly) -> list[list[Fraction]]:
    """Sturm chain of ``poly`` in exact rational arithmetic (ascending coeffs)."""
    return _sturm_exact(_exact(poly))


def _eval_exact(coeffs: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _variations(seq, x: Fraction) -> int:
    signs = []
    for q in seq:
        v = _eval_exact(q, x)
        if v != 0:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(seq, a: float, b: float) -> int:
    """Number of distinct real roots in (a, b]."""
    return _variations(seq, _to_fraction(a)) - _variations(seq, _to_fraction(b))


def cauchy_bound(poly: Poly) -> float:
    lead = abs(float(poly.coeffs[-1]))
    return 1.0 + max(abs(float(c)) / lead for c in poly.coeffs[:-1])


def _sign(x: float) -> int:
    return (x > 0) - (x < 0)


def real_roots(poly: Poly, tol: float = DEFAULT_TOL) -> RootSet:
    """Isolate and refine every distinct real root of ``poly``.

    Each returned root carries an enclosure half-width no larger than ``tol``.
    Roots whose enclosure shows no sign change are flagged as ``multiple``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if poly.degree < 1:
        raise ValueError("real_roots needs a nonconstant polynomial")
    work = poly.normalized()
    seq = sturm_sequence(work)
    bound = cauchy_bound(work)
    # pad so neither endpoint can be a root
    lo, hi = -bound * 1.0625 - 1.0, bound * 1.0625 + 1.0
    total = count_roots(seq, lo, hi)

    isolated: list[tuple[float, float]] = []
    clusters: list[Root] = []
    stack = [(lo, hi, total)]
    it = 0
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            isolated.append((a, b))
            continue
        if 0.5 * (b - a) <= tol:
            clusters.append(Root(0.5 * (a + b), 0.5 * (b - a), multiple=True))
            continue
        it += 1
        m = 0.5 * (a + b)
        if it > MAX_ITER * max(total, 1) or m in (a, b):
            raise RootIsolationError("could not separate clustered roots", (a, b))
        left = count_roots(seq, a, m)
        stack.append((a, m, left))
        stack.append((m, b, n - left))

    gcd = seq[-1]
    gcd_seq = _sturm_exact(gcd) if len(gcd) > 1 else None
    roots = [_refine(seq[0], gcd_seq, a, b, tol) for a, b in isolated] + clusters
    roots.sort(key=lambda r: r.location)
    return RootSet(roots=tuple(_merge_clusters(roots, tol)), certified_count=total)


def _exact_sign(coeffs: list[Fraction], x: float) -> int:
    v = _eval_exact(coeffs, _to_fraction(x))
    return (v > 0) - (v < 0)


def _refine(exact: list[Fraction], gcd_seq, a: float, b: float, tol: float) -> Root:
    # one distinct root in (a, b]; signs are exact so bisection never goes astray
    fa, fb = _exact_sign(exact, a), _exact_sign(exact, b)
    if fb == 0:
        a = b
    else:
        for _ in range(MAX_ITER):
            if 0.5 * (b - a) <= tol:
                break
            m = 0.5 * (a + b)
            if m in (a, b):
                break
            fm = _exact_sign(exact, m)
            if fm == 0:
                a = b = m
                break
            if fa * fb < 0:
                if fm == fa:
                    a = m
                else:
                    b = m
            elif count_roots_exact(exact, a, m) == 1:
                b = m
            else:
                a = m
    half = 0.5 * (b - a)
    if half > tol:
        raise RootIsolationError(f"enclosure stuck at half-width {half:.3g} > tol", (a, b))
    # multiple roots of p are exactly the roots of gcd(p, p')
    multiple = gcd_seq is not None and (
        count_roots(gcd_seq, a, b) > 0 or (a == b and _eval_exact(gcd_seq[0], _to_fraction(a)) == 0)
    )
    return Root(0.5 * (a + b), half, multiple=multiple)


def count_roots_exact(exact: list[Fraction], a: float, b: float) -> int:
    return count_roots(_sturm_exact(exact), a, b)


def _sturm_exact(p0: list[Fraction]) -> list[list[Fraction]]:
    p1 = [k * c for k, c in enumerate(p0) if k > 0]
    seq = [p0, p1]
    while True:
        r = _rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def _merge_clusters(roots: list[Root], tol: float) -> list[Root]:
    out: list[Root] = []
    for r in roots:
        if out:
            prev = out[-1]
            lo = min(prev.location - prev.half_width, r.location - r.half_width)
            hi = max(prev.location + prev.half_width, r.location + r.half_width)
            if 0.5 * (hi - lo) <= tol:
                out[-1] = Root(0.5 * (lo + hi), 0.5 * (hi - lo), multiple=True)
                continue
        out.append(r)
    return out


def largest_real_root(poly: Poly, tol: float = DEFAULT_TOL) -> float | None:
    rs = real_roots(poly, tol)
    if not rs.roots:
        return None
    return rs.roots[-1].location


def residual_ok(poly: Poly, root: Root, tol: float) -> bool:
    """Sign change across the enclosure, or a small scaled residual at the centre."""
    lo = evaluate(poly, root.location - root.half_width)
    hi = evaluate(poly, root.location + root.half_width)
    if _sign(lo) != _sign(hi):
        return True
    return abs(evaluate(poly, root.location)) <= tol * poly.scale()


__all__ = [
    "Poly",
    "Root",
    "RootSet",
    "RootIsolationError",
    "evaluate",
    "derivative",
    "sturm_sequence",
    "count_roots",
    "real_roots",
    "largest_real_root",
    "residual_ok",
]
