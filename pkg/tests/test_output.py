import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from liouville_lab import output, thresholds as th


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_round_trip_is_identity(x):
    once = output.normalize(x)
    assert json.loads(json.dumps(once)) == once
    assert output.normalize(once) == once


def test_normalize_special_values():
    assert output.normalize([math.inf, -math.inf, math.nan]) == ["inf", "-inf", "nan"]
    assert output.normalize(np.float64(1 / 3)) == 0.333333333333
    assert output.normalize(th.SingularVerdict.STABLE) == "stable"
    assert output.normalize({"a": (np.int64(2), np.bool_(True))}) == {"a": [2, True]}


def test_record_json_parses_back():
    rec = output.record("threshold", {"p": 3.0}, th.threshold_report(3, 13))
    text = output.to_json(rec)
    back = json.loads(text)
    assert back == rec
    assert output.to_json(back) == text
    assert back["payload"]["verdicts"]["singular_solution"] == "unstable"
    assert back["payload"]["dim_threshold"] == pytest.approx(17.8351532815, abs=1e-9)


def test_text_and_csv():
    rec = output.record("x", {}, {"a": {"b": 1.5, "c": [1, 2]}, "d": None})
    assert output.to_text(rec) == "a.b=1.5\na.c=1,2\nd=null\n"
    csv = output.to_csv([{"p": 3.0, "x0": 1 / 3}], ("p", "x0"))
    assert csv == "p,x0\n3,0.333333333333\n"
