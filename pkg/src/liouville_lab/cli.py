"""Command line front end.

Exit codes: 0 success, 1 a check or computation failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import exponents as ex
from . import output
from . import precision as prec
from . import radial_sim as rs
from . import rayleigh as ry
from . import thresholds as th
from . import verifier as vf


class UsageError(Exception):
    pass


def _p_value(text: str) -> float:
    try:
        p = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not p > 1:
        raise argparse.ArgumentTypeError(f"p must exceed 1, got {text}")
    return p


def _positive(text: str) -> float:
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return x


def _dim(text: str) -> int:
    N = int(text)
    if N < 1:
        raise argparse.ArgumentTypeError(f"N must be a positive integer, got {text}")
    return N


def _common(parser: argparse.ArgumentParser, formats=("json", "text")) -> None:
    parser.add_argument("--format", choices=formats, default="json")
    parser.add_argument("--out", metavar="FILE", help="write output here instead of stdout")
    parser.add_argument(
        "--precision", choices=prec.MODES, default="double",
        help=f"formula precision (the {prec.ENV_VAR} environment variable takes priority)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="liouville-lab",
        description="Stability thresholds for Δ²u = u^p: compute, verify, simulate.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("threshold", help="thresholds and verdicts at one p (and N)")
    p.add_argument("-p", type=_p_value, required=True)
    p.add_argument("-N", type=_dim)
    p.add_argument("--tol", type=_positive, default=th.ROOT_TOL)
    _common(p)

    p = sub.add_parser("sweep", help="threshold table over a p grid")
    p.add_argument("--p-from", type=_p_value, required=True)
    p.add_argument("--p-to", type=_p_value, required=True)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--log", action="store_true", help="log-spaced p instead of linear")
    p.add_argument("-N", type=_dim, help="also report verdicts at this dimension")
    p.add_argument("--jobs", type=int, default=1)
    _common(p, ("json", "csv", "text"))

    p = sub.add_parser("verify", help="identity/inequality ledger over a p grid")
    p.add_argument("--p-min", type=_p_value, default=1.001)
    p.add_argument("--p-max", type=_p_value, default=1e3)
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--N-min", type=int, default=5)
    p.add_argument("--N-max", type=int, default=30)
    p.add_argument("--samples", type=int, default=vf.DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=vf.DEFAULT_SEED)
    p.add_argument("--tol", type=_positive, default=vf.DEFAULT_TOL)
    _common(p)

    p = sub.add_parser("radial", help="integrate or shoot a radial profile")
    p.add_argument("-p", type=_p_value, required=True)
    p.add_argument("-N", type=_dim, required=True)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--a", type=float, help="integrate with v(0) = A")
    mode.add_argument("--shoot", action="store_true", help="bisect for the entire solution")
    p.add_argument("--r-max", type=_positive, default=1e3)
    p.add_argument("--tol", type=_positive, default=1e-13, help="bracket width for --shoot")
    p.add_argument("--profile", metavar="CSV", help="write the profile (r,u,du,v,dv)")
    _common(p)

    p = sub.add_parser("rayleigh", help="discrete Rayleigh quotient for a radial weight")
    p.add_argument("-p", type=_p_value, required=True)
    p.add_argument("-N", type=_dim, required=True)
    p.add_argument("--weight", choices=("singular", "hardy-rellich"), default="singular")
    p.add_argument("--decades", type=_positive, default=6.0)
    p.add_argument("--basis", type=int, default=512)
    p.add_argument("--consistency", action="store_true",
                   help="compare a widening-domain trajectory with the algebraic verdict")
    _common(p)

    p = sub.add_parser("report", help="threshold table, radial and Rayleigh data plus figures")
    p.add_argument("--outdir", required=True)
    p.add_argument("--p-from", type=_p_value, default=1.001)
    p.add_argument("--p-to", type=_p_value, default=1e3)
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--log", action="store_true", default=True)
    p.add_argument("-p", type=_p_value, help="point for the radial and Rayleigh panels")
    p.add_argument("-N", type=_dim)
    p.add_argument("--jobs", type=int, default=1)
    _common(p)
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _render(rec: dict, fmt: str) -> str:
    return output.to_text(rec) if fmt == "text" else output.to_json(rec)


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise UsageError(message)


def _args_echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "out")}


def cmd_threshold(args) -> int:
    if args.N is not None:
        _require(args.N >= 5, "threshold verdicts need N >= 5")
    rep = th.threshold_report(args.p, args.N)
    payload = rep.to_dict()
    payload["x0_direct"] = th.x0_direct(args.p, args.tol)
    if args.N is not None:
        payload["regularity"] = th.extremal_regularity_report(args.p, args.N)
    rec = output.record("threshold", _args_echo(args), payload)
    _emit(_render(rec, args.format), args.out)
    return 0


def sweep_row(p: float, N: int | None = None) -> dict:
    rep = th.threshold_report(p, N)
    row = {k: getattr(rep, k) for k in output.SWEEP_COLUMNS}
    if N is not None:
        row.update(N=N, stable_nonexistence=rep.verdicts.stable_nonexistence,
                   singular_solution=rep.verdicts.singular_solution)
    return output.normalize(row)


def sweep_grid(p_from: float, p_to: float, steps: int, log: bool) -> np.ndarray:
    return np.geomspace(p_from, p_to, steps) if log else np.linspace(p_from, p_to, steps)


def run_sweep(grid, N=None, jobs: int = 1) -> list[dict]:
    Ns = [N] * len(grid)
    ps = [float(p) for p in grid]
    if jobs <= 1:
        return list(map(sweep_row, ps, Ns))
    # map() hands results back in input order whatever the completion order
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(sweep_row, ps, Ns, chunksize=max(1, len(ps) // (4 * jobs))))


def _sweep_columns(N) -> tuple:
    return output.SWEEP_COLUMNS + (output.SWEEP_VERDICT_COLUMNS if N is not None else ())


def cmd_sweep(args) -> int:
    _require(args.p_from < args.p_to, "need --p-from < --p-to")
    _require(args.steps >= 2, "need --steps >= 2")
    _require(args.jobs >= 1, "need --jobs >= 1")
    if args.N is not None:
        _require(args.N >= 5, "verdicts need N >= 5")
    rows = run_sweep(sweep_grid(args.p_from, args.p_to, args.steps, args.log), args.N, args.jobs)
    if args.format == "csv":
        text = output.to_csv(rows, _sweep_columns(args.N))
    else:
        rec = output.record("sweep", _args_echo(args), {"columns": list(_sweep_columns(args.N)), "rows": rows})
        text = _render(rec, args.format)
    _emit(text, args.out)
    return 0


def cmd_verify(args) -> int:
    _require(args.p_min < args.p_max, "need --p-min < --p-max")
    _require(args.steps >= 1 and args.samples >= 1, "need --steps >= 1 and --samples >= 1")
    _require(5 <= args.N_min <= args.N_max, "need 5 <= --N-min <= --N-max")
    grid = vf.default_grid(args.p_min, args.p_max, args.steps)
    report = vf.verify_all(grid, args.tol, range(args.N_min, args.N_max + 1), args.samples, args.seed)
    report.grid["precision"] = prec.current()
    rec = output.record("verify", _args_echo(args), report.to_dict())
    _emit(_render(rec, args.format), args.out)
    if not report.passed:
        failed = [c.name for c in report.checks if not c.passed]
        print(f"verification failed: {', '.join(failed)}", file=sys.stderr)
    return 0 if report.passed else 1


def radial_payload(p: float, N: int, a: float | None, r_max: float, tol: float):
    """Run one radial computation; returns (payload, solution, trusted radius)."""
    payload: dict = {}
    if a is None:
        res = rs.shoot(p, N, tol=tol, r_max=r_max)
        sol, trusted = res.solution, res.trusted_radius
        payload["shooting"] = res.summary()
    else:
        sol = rs.integrate(p, N, a, r_max)
        trusted = sol.event_radius
    payload["solution"] = sol.summary()
    analysed = sol.restrict(trusted)
    payload["analysis_radius"] = analysed.event_radius
    try:
        payload["tail_exponent"] = rs.tail_exponent(analysed)
        payload["tail_amplitude"] = rs.tail_amplitude(analysed)
        payload["expected_tail_exponent"] = float(ex.singular_exponent(p))
        payload["mass_growth_exponent"] = rs.mass_growth_exponent(analysed)
        payload["mass_growth_bound"] = rs.mass_growth_bound(p, N)
    except rs.InsufficientDataError as exc:
        payload["tail_exponent"] = None
        payload["tail_note"] = str(exc)
    if np.all(analysed.u >= 0):
        payload["souplet"] = rs.souplet_check(analysed)
    return payload, sol, trusted


def cmd_radial(args) -> int:
    _require(args.N >= 5, "radial simulation needs N >= 5")
    if args.shoot:
        crit = float(ex.sobolev_critical(args.N))
        _require(args.p > crit, f"--shoot needs p > (N+4)/(N-4) = {crit:.6g} (got {args.p})")
    try:
        payload, sol, _ = radial_payload(args.p, args.N, None if args.shoot else args.a, args.r_max, args.tol)
    except rs.BracketingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.profile:
        Path(args.profile).write_text(sol.to_csv())
        payload["profile_csv"] = args.profile
    rec = output.record("radial", _args_echo(args), payload)
    _emit(_render(rec, args.format), args.out)
    return 0


def cmd_rayleigh(args) -> int:
    _require(args.N >= 5, "the Hardy-Rellich setting needs N >= 5")
    _require(args.basis >= 8, "need --basis >= 8")
    half = 10 ** (args.decades / 2)
    if args.weight == "hardy-rellich":
        res = ry.rayleigh_stability(ry.power_weight(1.0), 1.0, args.N, 1 / half, half, args.basis)
        payload = {"result": res.to_dict(), "hardy_rellich_constant": float(ex.hardy_rellich_constant(args.N))}
    else:
        _require(args.p > float(ex.sobolev_critical(args.N)), "the singular weight needs p > (N+4)/(N-4)")
        res = ry.rayleigh_stability(ry.singular_weight(args.p, args.N), args.p, args.N, 1 / half, half, args.basis)
        payload = {"result": res.to_dict(), "classified": th.classify_singular_solution(args.p, args.N)}
        if args.consistency:
            payload["consistency"] = ry.stability_consistency(args.p, args.N)
    rec = output.record("rayleigh", _args_echo(args), payload)
    _emit(_render(rec, args.format), args.out)
    return 0


def cmd_report(args) -> int:
    from . import plotting

    _require(args.p_from < args.p_to and args.steps >= 2, "need --p-from < --p-to and --steps >= 2")
    _require((args.p is None) == (args.N is None), "give both -p and -N or neither")
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    files = {}
    rows = run_sweep(sweep_grid(args.p_from, args.p_to, args.steps, args.log), None, args.jobs)
    (outdir / "thresholds.csv").write_text(output.to_csv(rows, output.SWEEP_COLUMNS))
    files["thresholds_csv"] = "thresholds.csv"
    files["thresholds_png"] = Path(plotting.plot_thresholds(rows, outdir / "thresholds.png")).name
    payload: dict = {"files": files, "rows": len(rows)}
    if args.p is not None:
        _require(args.N >= 5, "radial and Rayleigh panels need N >= 5")
        payload["threshold"] = th.threshold_report(args.p, args.N)
        if args.p > float(ex.sobolev_critical(args.N)):
            radial, sol, trusted = radial_payload(args.p, args.N, None, 1e3, 1e-13)
            (outdir / "profile.csv").write_text(sol.to_csv())
            files["profile_csv"] = "profile.csv"
            files["profile_png"] = Path(plotting.plot_profile(sol, outdir / "profile.png", trusted)).name
            consistency = ry.stability_consistency(args.p, args.N)
            (outdir / "rayleigh.json").write_text(
                output.to_json(output.record("rayleigh", {"p": args.p, "N": args.N}, consistency))
            )
            files["rayleigh_json"] = "rayleigh.json"
            files["rayleigh_png"] = Path(plotting.plot_quotients(consistency, outdir / "rayleigh.png")).name
            payload["radial"] = radial
            payload["consistency"] = consistency
    rec = output.record("report", _args_echo(args), payload)
    (outdir / "report.json").write_text(output.to_json(rec))
    _emit(_render(rec, args.format), args.out)
    return 0


COMMANDS = {
    "threshold": cmd_threshold,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "radial": cmd_radial,
    "rayleigh": cmd_rayleigh,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        mode = prec.env_mode() or args.precision
    except ValueError as exc:
        parser.error(str(exc))
    try:
        with prec.precision(mode):
            return COMMANDS[args.command](args)
    except (UsageError, ex.DomainError) as exc:
        parser.error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
