"""Double / extended precision switch for the closed-form formulas.

Extended mode evaluates through mpmath at ``EXTENDED_DPS`` decimal digits.
The environment variable ``LIOUVILLE_LAB_PRECISION`` sets the default mode
and, in the CLI, overrides ``--precision``.
"""

from __future__ import annotations

import contextlib
import contextvars
import math
import os

import mpmath

ENV_VAR = "LIOUVILLE_LAB_PRECISION"
MODES = ("double", "extended")
EXTENDED_DPS = 50

_mode: contextvars.ContextVar[str | None] = contextvars.ContextVar("precision_mode", default=None)


def _check(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"precision must be one of {MODES}, got {mode!r}")
    return mode


def env_mode() -> str | None:
    value = os.environ.get(ENV_VAR)
    return _check(value.strip().lower()) if value else None


def current() -> str:
    mode = _mode.get()
    if mode is not None:
        return mode
    return env_mode() or "double"


def is_extended() -> bool:
    return current() == "extended"


@contextlib.contextmanager
def precision(mode: str):
    """Evaluate formulas in ``mode`` inside the block."""
    token = _mode.set(_check(mode))
    try:
        if mode == "extended":
            with mpmath.workdps(EXTENDED_DPS):
                yield
        else:
            yield
    finally:
        _mode.reset(token)


def num(x):
    """Coerce to the working number type."""
    if is_extended():
        return mpmath.mpf(x)
    return float(x)


def sqrt(x):
    if is_extended():
        return mpmath.sqrt(x)
    return float(x) ** 0.5
