"""Figures for the report command, written straight to files.

Figures are built on ``matplotlib.figure.Figure`` so no pyplot state or
interactive backend is involved.
"""

from __future__ import annotations

import numpy as np
from matplotlib.figure import Figure

FIGSIZE = (6.4, 4.2)
DPI = 150


def _save(fig: Figure, path) -> str:
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    return str(path)


def plot_thresholds(rows: list[dict], path) -> str:
    """Dimension thresholds against p, log-scaled in p - 1."""
    p = np.array([r["p"] for r in rows])
    fig = Figure(figsize=FIGSIZE)
    ax = fig.add_subplot()
    ax.plot(p - 1, [r["jl4_threshold"] for r in rows], label=r"$2+2x_1$ (JL$_4$)")
    ax.plot(p - 1, [r["dim_threshold"] for r in rows], label=r"$2+2x_0$")
    ax.plot(p - 1, [r["cowan_threshold"] for r in rows], "--", label="Cowan bound")
    ax.axhline(12, color="0.5", lw=0.8, ls=":")
    ax.set_xscale("log")
    ax.set_xlabel(r"$p-1$")
    ax.set_ylabel("dimension threshold")
    top = max(r["jl4_threshold"] for r in rows)
    ax.set_ylim(9, min(top, 40) + 1)
    ax.legend(frameon=False)
    return _save(fig, path)


def plot_profile(sol, path, trusted_radius: float | None = None) -> str:
    """u r^(4/(p-1)) and v r^(4p/(p-1)) against r for a radial profile."""
    m = 4 / (sol.p - 1)
    fig = Figure(figsize=FIGSIZE)
    ax = fig.add_subplot()
    ax.semilogx(sol.r, sol.u * sol.r**m, label=r"$u\,r^{4/(p-1)}$")
    ax.semilogx(sol.r, sol.v * sol.r ** (m + 2), label=r"$v\,r^{4/(p-1)+2}$")
    if trusted_radius is not None:
        ax.axvline(trusted_radius, color="0.5", lw=0.8, ls=":")
    ax.set_xlabel("r")
    ax.set_title(f"p={sol.p:g}, N={sol.N}, a={sol.a:.10g}", fontsize=9)
    ax.legend(frameon=False)
    return _save(fig, path)


def plot_quotients(report, path) -> str:
    """Rayleigh quotient trajectory against domain width, with the algebraic ratio."""
    fig = Figure(figsize=FIGSIZE)
    ax = fig.add_subplot()
    ax.plot(report.decades, report.quotients, "o-", label="discrete minimum")
    ax.axhline(report.algebraic_ratio, color="C1", ls="--", label="algebraic ratio")
    ax.axhline(1.0, color="0.5", lw=0.8, ls=":")
    ax.set_xlabel("decades of radius")
    ax.set_ylabel("min Rayleigh quotient")
    ax.set_title(f"p={report.p:g}, N={report.N}: {report.verdict}", fontsize=9)
    ax.legend(frameon=False)
    return _save(fig, path)
