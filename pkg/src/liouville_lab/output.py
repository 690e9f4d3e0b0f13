"""Serialisation of command results: JSON records, CSV tables and key=value text."""

from __future__ import annotations

import csv
import dataclasses
import enum
import io
import json
import math

import numpy as np

SCHEMA_VERSION = 1
SIG_DIGITS = 12

SWEEP_COLUMNS = (
    "p", "t0", "s0", "x0", "dim_threshold", "cowan_threshold", "x1", "jl4_threshold",
)
SWEEP_VERDICT_COLUMNS = ("N", "stable_nonexistence", "singular_solution")


def round_sig(x: float, digits: int = SIG_DIGITS) -> float:
    return float(f"{x:.{digits}g}")


def normalize(obj, digits: int = SIG_DIGITS):
    """Plain JSON-ready structure with floats rounded to ``digits`` significant digits.

    Non-finite floats become the strings "inf", "-inf" and "nan".
    """
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        obj = obj.to_dict() if hasattr(obj, "to_dict") else dataclasses.asdict(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): normalize(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize(v, digits) for v in obj]
    if isinstance(obj, np.ndarray):
        return [normalize(v, digits) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if obj is None or isinstance(obj, str):
        return obj
    x = float(obj)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return round_sig(x, digits)


def record(command: str, args: dict, payload) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": {"name": command, "args": normalize(args)},
        "payload": normalize(payload),
    }


def to_json(rec: dict) -> str:
    return json.dumps(rec, indent=2, allow_nan=False) + "\n"


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}.")
    elif isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield prefix[:-1], obj


def _text_value(v) -> str:
    if isinstance(v, float):
        return f"{v:.{SIG_DIGITS}g}"
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, list):
        return ",".join(_text_value(x) for x in v)
    return str(v)


def to_text(rec: dict) -> str:
    return "".join(f"{k}={_text_value(v)}\n" for k, v in _flatten(rec["payload"]))


def to_csv(rows: list[dict], columns) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_text_value(normalize(row.get(c))) for c in columns])
    return out.getvalue()
