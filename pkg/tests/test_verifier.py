import json

import numpy as np
import pytest

from liouville_lab import verifier as vf


def test_default_grid_shape():
    g = vf.default_grid()
    assert g.size == 200
    assert g[0] == pytest.approx(1.001) and g[-1] == pytest.approx(1e3)
    assert np.all(np.diff(g) > 0)
    with pytest.raises(ValueError):
        vf.default_grid(0.5, 10)


def test_single_point_identities():
    rep = vf.verify_identities([3.0])
    assert rep.passed
    assert rep.check("J_equals_scaled_H5").max_abs_residual == pytest.approx(0, abs=1e-9)
    assert set(c.name for c in rep.checks) == set(vf.IDENTITY_CHECKS)


def test_identity_precision_switch():
    assert vf.identity_precision(1.005) == "extended"
    assert vf.identity_precision(1.05) == "extended"  # H coefficients ~1e7
    assert vf.identity_precision(3.0) == "double"


def test_near_one_grid_passes():
    rep = vf.verify_all(vf.default_grid(1.000001, 1.01, 12), n_samples=10)
    assert rep.passed, [c.name for c in rep.checks if not c.passed]


def test_default_run_passes_and_serialises():
    rep = vf.verify_all()
    assert rep.passed, [c.name for c in rep.checks if not c.passed]
    d = json.loads(rep.to_json())
    assert d["passed"] is True
    assert len(d["checks"]) == 19
    for name, c in d["checks"].items():
        assert set(c) == {"pass", "residuals", "witnesses", "failing_p", "evaluations"}
        assert c["evaluations"] > 0, name
    assert d["checks"]["x0_gt_5"]["witnesses"]["min_margin"] > 1e-6


def test_deterministic_with_seed():
    g = vf.default_grid(n=20)
    assert vf.verify_all(g, n_samples=5).to_json() == vf.verify_all(g, n_samples=5).to_json()


def test_failures_are_recorded_not_raised():
    c = vf.CheckResult("demo")
    c.record(2.0, 1.0, 1.1, 1e-9)
    c.require(3.0, -0.5)
    c.agree(4.0, True, False, N=7)
    assert not c.passed
    assert c.failing_p == [2.0, 3.0, 4.0]
    assert c.witnesses["disagreements"] == [{"p": 4.0, "N": 7}]


def test_merge_rejects_duplicates():
    a = vf.verify_identities([3.0])
    with pytest.raises(ValueError):
        a.merge(a)
