import math

import numpy as np
import pytest

from liouville_lab import rayleigh as ry

HR13 = 855.5625


def test_hardy_rellich_one_sided_and_decreasing():
    qs = [ry.hardy_rellich_quotient(13, d, 256).min_quotient for d in (2, 4, 6)]
    assert all(q >= HR13 * (1 - 1e-6) for q in qs)
    assert qs[0] > qs[1] > qs[2]
    assert qs[-1] <= 1.1 * HR13


def test_singular_weight_examples():
    w = ry.singular_weight(3.0, 13)
    assert w(np.array([1.0]))[0] == 504
    q = ry.rayleigh_stability(w, 3.0, 13, 1e-2, 1e2, 256).min_quotient
    assert HR13 / 1512 < q < 1
    q20 = ry.rayleigh_stability(ry.singular_weight(3.0, 20), 3.0, 20, 1e-3, 1e3, 256).min_quotient
    assert q20 > 6400 / 5376 > 1


def test_zero_weight_and_bad_input():
    res = ry.rayleigh_stability(lambda r: np.zeros_like(r), 3.0, 13, 0.1, 10, 32)
    assert math.isinf(res.min_quotient)
    with pytest.raises(ValueError):
        ry.rayleigh_stability(ry.power_weight(1.0), 1.0, 13, 0.1, 10, 6)
    with pytest.raises(ValueError):
        ry.rayleigh_stability(ry.power_weight(1.0), 1.0, 13, 10, 1, 32)
    with pytest.raises(ry.RayleighError):
        ry.rayleigh_stability(ry.power_weight(-1.0), 1.0, 13, 0.1, 10, 32)


def test_residual_small():
    assert ry.hardy_rellich_quotient(13, 3, 128).residual < 1e-8


@pytest.mark.parametrize("N, verdict", [(13, "unstable"), (18, "unstable"), (19, "stable"), (20, "stable")])
def test_consistency(N, verdict):
    rep = ry.stability_consistency(3.0, N)
    assert rep.classified == verdict
    assert rep.verdict == verdict and rep.agrees
    assert rep.extrapolated == pytest.approx(rep.algebraic_ratio, rel=0.02)


def test_consistency_precondition():
    with pytest.raises(ValueError):
        ry.stability_consistency(1.5, 13)
