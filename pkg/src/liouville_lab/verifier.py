"""Grid verification of the algebraic identities and inequalities behind the thresholds.

Every check runs over a p-grid and is summarised as one ``CheckResult``.
Failures are recorded in the report, never raised.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import exponents as ex
from . import thresholds as th
from .polynomials import count_roots, derivative, evaluate, sturm_sequence
from .precision import is_extended, num, precision

DEFAULT_TOL = 1e-9
EXTENDED_BELOW = 1.01
DEFAULT_SAMPLES = 50
DEFAULT_SEED = 20121


def default_grid(p_min: float = 1.001, p_max: float = 1e3, n: int = 200) -> np.ndarray:
    """n points with p - 1 log-spaced between p_min - 1 and p_max - 1."""
    if not 1 < p_min < p_max or n < 1:
        raise ValueError(f"need 1 < p_min < p_max and n >= 1, got {p_min}, {p_max}, {n}")
    return 1 + np.geomspace(p_min - 1, p_max - 1, n)


def describe_grid(grid) -> dict:
    grid = np.asarray(grid, dtype=float)
    return {"n": int(grid.size), "p_min": float(grid.min()), "p_max": float(grid.max())}


@dataclass
class CheckResult:
    name: str
    passed: bool = True
    max_abs_residual: float = 0.0
    max_rel_residual: float = 0.0
    failing_p: list = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)
    evaluations: int = 0

    def record(self, p: float, lhs, rhs, tol: float) -> None:
        # subtract before converting so extended-precision residuals survive
        diff = float(abs(lhs - rhs))
        rel = diff / max(1.0, abs(float(lhs)), abs(float(rhs)))
        self.evaluations += 1
        self.max_abs_residual = max(self.max_abs_residual, diff)
        if rel > self.max_rel_residual:
            self.max_rel_residual = rel
            self.witnesses["worst_p"] = float(p)
        if not rel <= tol:
            self._fail(p)

    def require(self, p: float, margin, what: str = "margin") -> None:
        """Record a strict inequality expressed as ``margin > 0``."""
        margin = float(margin)
        self.evaluations += 1
        key = f"min_{what}"
        if key not in self.witnesses or margin < self.witnesses[key]:
            self.witnesses[key] = margin
            self.witnesses["worst_p"] = float(p)
        if not margin > 0:
            self.max_abs_residual = max(self.max_abs_residual, -margin)
            self._fail(p)

    def agree(self, p: float, a: bool, b: bool, **where) -> None:
        self.evaluations += 1
        if a != b:
            self._fail(p)
            self.witnesses.setdefault("disagreements", []).append({"p": float(p), **where})

    def _fail(self, p: float) -> None:
        self.passed = False
        if float(p) not in self.failing_p:
            self.failing_p.append(float(p))

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "residuals": {"max_abs": self.max_abs_residual, "max_rel": self.max_rel_residual},
            "witnesses": self.witnesses,
            "failing_p": self.failing_p,
            "evaluations": self.evaluations,
        }


@dataclass
class VerificationReport:
    grid: dict
    checks: list = field(default_factory=list)
    seed: int | None = None
    tol: float | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        names = {c.name for c in self.checks}
        dup = names & {c.name for c in other.checks}
        if dup:
            raise ValueError(f"checks listed twice: {sorted(dup)}")
        return VerificationReport(
            grid=self.grid, checks=self.checks + other.checks, seed=self.seed, tol=self.tol
        )

    def to_dict(self) -> dict:
        return {
            "grid": self.grid,
            "seed": self.seed,
            "tol": self.tol,
            "passed": self.passed,
            "checks": {c.name: c.to_dict() for c in self.checks},
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)


def _rng(seed: int, index: int) -> np.random.Generator:
    # one stream per grid point keeps results independent of evaluation order
    return np.random.default_rng([seed, index])


IDENTITY_CHECKS = (
    "t0_quartic_identity",
    "L_at_2t0_closed_form",
    "L_second_derivative_closed_form",
    "H_L_scaling",
    "H_minus_HJL4",
    "J_equals_scaled_H5",
)


def identity_precision(p: float, tol: float = DEFAULT_TOL) -> str:
    """Extended below p = 1.01, and wherever double rounding in H's coefficients
    would already exceed a hundredth of ``tol``.  Always extended when the
    caller is already in extended mode."""
    if is_extended() or p < EXTENDED_BELOW:
        return "extended"
    if ex.poly_H(p).scale() * np.finfo(float).eps > 0.01 * tol:
        return "extended"
    return "double"


def verify_identities(
    p_grid, tol: float = DEFAULT_TOL, n_samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED
) -> VerificationReport:
    checks = {name: CheckResult(name) for name in IDENTITY_CHECKS}
    J = ex.poly_J()
    for i, p in enumerate(np.asarray(p_grid, dtype=float)):
        rng = _rng(seed, i)
        s_root = th.s0(p)
        x_root = th.x0(p)
        s_samples = rng.uniform(0.0, s_root + 10.0, n_samples)
        s_convex = rng.uniform(2 * float(ex.t0(p)), s_root + 10.0, n_samples)
        x_samples = rng.uniform(-x_root - 5.0, x_root + 5.0, n_samples)
        with precision(identity_precision(p, tol)):
            P = num(p)
            t = ex.t0(p)
            b = 2 * P / (P + 1)
            checks["t0_quartic_identity"].record(p, t ** 4, b * (2 * t - 1) ** 2, tol)

            L = ex.poly_L(p)
            checks["L_at_2t0_closed_form"].record(
                p, (P + 1) ** 2 * evaluate(L, 2 * t) / (32 * P), (P - 1) * (1 - 2 * t), tol
            )

            L2 = derivative(derivative(L))
            for s in s_convex:
                s = num(s)
                checks["L_second_derivative_closed_form"].record(
                    p, (P + 1) * evaluate(L2, s), 12 * (P + 1) * s ** 2 - 64 * P, tol
                )

            H = ex.poly_H(p)
            HJ = ex.poly_HJL4(p)
            k = (P + 1) / (P - 1)
            for s in s_samples:
                s = num(s)
                checks["H_L_scaling"].record(p, k ** 4 * evaluate(L, s), evaluate(H, k * s), tol)
            for x in x_samples:
                x = num(x)
                checks["H_minus_HJL4"].record(p, evaluate(H, x) - evaluate(HJ, x), 2 * x ** 2 - 1, tol)

            checks["J_equals_scaled_H5"].record(
                p, (P - 1) ** 4 * evaluate(H, num(5)), evaluate(J, P), tol
            )
    return VerificationReport(
        grid=describe_grid(p_grid), checks=list(checks.values()), seed=seed, tol=tol
    )


def verify_inequalities(
    p_grid, n_samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED
) -> VerificationReport:
    names = (
        "L_at_2t0_negative",
        "L_convex_beyond_2t0",
        "L_unique_root_beyond_2t0",
        "s0_gt_2t0",
        "x0_gt_5",
        "x0_gt_cowan_bound",
        "x0_lt_x1",
        "J_negative_for_p_ge_2",
        "J_prime_negative_for_p_ge_2",
        "J_second_negative_for_p_ge_2",
        "small_p_path_6t0_gt_5",
    )
    checks = {n: CheckResult(n) for n in names}
    J = ex.poly_J()
    J1 = derivative(J)
    J2 = derivative(J1)
    for i, p in enumerate(np.asarray(p_grid, dtype=float)):
        rng = _rng(seed, i)
        t = float(ex.t0(p))
        L = ex.poly_L(p)
        s_root = th.s0(p)
        xz = th.x0(p)

        checks["L_at_2t0_negative"].require(p, -evaluate(L, 2 * t))
        L2 = derivative(derivative(L))
        s_grid = np.concatenate(([2 * t, s_root + 10.0], rng.uniform(2 * t, s_root + 10.0, n_samples)))
        checks["L_convex_beyond_2t0"].require(p, min(evaluate(L2, s) for s in s_grid))

        seq = sturm_sequence(L)
        far = 2 * t + 4 * max(1.0, max(abs(c) for c in L.coeffs))
        n_roots = count_roots(seq, 2 * t, far)
        checks["L_unique_root_beyond_2t0"].agree(p, n_roots == 1, True, root_count=n_roots)

        checks["s0_gt_2t0"].require(p, s_root - 2 * t)
        checks["x0_gt_5"].require(p, xz - 5)
        checks["x0_gt_cowan_bound"].require(p, xz - 2 * (p + 1) * t / (p - 1))
        checks["x0_lt_x1"].require(p, th.x1(p) - xz)
        if p >= 2:
            checks["J_negative_for_p_ge_2"].require(p, -evaluate(J, p))
            checks["J_prime_negative_for_p_ge_2"].require(p, -evaluate(J1, p))
            checks["J_second_negative_for_p_ge_2"].require(p, -evaluate(J2, p))
        else:
            # for p in (1, 2): x0 > 2(p+1) t0/(p-1) >= 6 t0 > 5
            chk = checks["small_p_path_6t0_gt_5"]
            chk.require(p, 2 * (p + 1) * t / (p - 1) - 6 * t, "ratio_margin")
            chk.require(p, 6 * t - 5, "margin")
    return VerificationReport(grid=describe_grid(p_grid), checks=list(checks.values()), seed=seed)


def verify_equivalences(
    p_grid,
    N_range=range(5, 31),
    n_samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> VerificationReport:
    product = CheckResult("product_condition_iff_L_negative")
    beta = CheckResult("beta_range_iff_dimension_threshold")
    for i, p in enumerate(np.asarray(p_grid, dtype=float)):
        rng = _rng(seed, i)
        s_root = th.s0(p)
        for s in rng.uniform(2.0, s_root + 10.0, n_samples):
            product.agree(p, ex.stability_product_condition(s, p), ex.L_negative(s, p), s=float(s))
        threshold = th.dimension_threshold(p)
        for N in N_range:
            beta.agree(p, th.nonexistence_via_beta(p, N), N < threshold, N=int(N))
    grid = describe_grid(p_grid)
    grid["N_range"] = [int(min(N_range)), int(max(N_range))]
    return VerificationReport(grid=grid, checks=[product, beta], seed=seed)


def verify_all(
    p_grid=None,
    tol: float = DEFAULT_TOL,
    N_range=range(5, 31),
    n_samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> VerificationReport:
    if p_grid is None:
        p_grid = default_grid()
    report = verify_identities(p_grid, tol, n_samples, seed)
    report = report.merge(verify_inequalities(p_grid, n_samples, seed))
    report = report.merge(verify_equivalences(p_grid, N_range, n_samples, seed))
    report.grid["N_range"] = [int(min(N_range)), int(max(N_range))]
    report.grid["samples_per_p"] = n_samples
    return report
