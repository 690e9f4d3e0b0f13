import csv
import io
import math

import numpy as np
import pytest

from liouville_lab import radial_sim as rs


def _synthetic(K, m, p=3.0, N=13, r=None):
    r = np.geomspace(1.0, 1e3, 400) if r is None else r
    u = K * r**m
    # v = -Δu for a pure power: -m (m + N - 2) K r^(m-2)
    v = -m * (m + N - 2) * K * r ** (m - 2)
    zeros = np.zeros_like(r)
    return rs.RadialSolution(p, N, 0.0, r, u, zeros, v, zeros, rs.REACHED_RMAX, float(r[-1]))


@pytest.mark.parametrize("m", [-1.0, -2.0, -3.0])
def test_tail_exponent_synthetic(m):
    assert rs.tail_exponent(_synthetic(22.45, m)) == pytest.approx(m, abs=1e-12)


def test_tail_amplitude_synthetic():
    assert rs.tail_amplitude(_synthetic(22.45, -2.0)) == pytest.approx(22.45, rel=1e-12)


def test_tail_insufficient_data():
    with pytest.raises(rs.InsufficientDataError):
        rs.tail_exponent(_synthetic(1.0, -2.0, r=np.geomspace(1, 1e3, 12)))


def test_souplet_synthetic_singular():
    K = math.sqrt(504)
    res = rs.souplet_check(_synthetic(K, -2.0))
    assert 18 * K >= K**2 / math.sqrt(2)
    assert res.max_violation <= 0
    assert res.min_v > 0


def test_souplet_zero_profile():
    sol = _synthetic(0.0, -2.0)
    sol.v = np.linspace(0.5, 2.0, sol.r.size)
    assert rs.souplet_check(sol).max_violation == pytest.approx(-0.5)


def test_series_start_matches_equations():
    p, N, a = 3.0, 13, 0.7
    r = 1e-3
    u, du, v, dv = rs.series_start(p, N, a, r)
    assert du == pytest.approx(-a * r / N, rel=1e-5)
    assert dv == pytest.approx(-r / N, rel=1e-5)
    assert u == pytest.approx(1, abs=1e-6) and v == pytest.approx(a, abs=1e-6)


def test_bracket_endpoints_classify_differently():
    assert rs.integrate(3.0, 13, 0.0, 1e3).event == rs.V_CROSSED_ZERO
    assert rs.integrate(3.0, 13, 1e3, 1e3).event == rs.U_CROSSED_ZERO


def test_self_convergence():
    fine = rs.IntegrationControls(rtol=5e-13)
    a = rs.integrate(3.0, 13, 0.7, 5.0)
    b = rs.integrate(3.0, 13, 0.7, 5.0, fine)
    assert a.event == b.event == rs.REACHED_RMAX
    assert np.max(np.abs(a.u - b.u)) < 1e-9


def test_bracketing_error():
    with pytest.raises(rs.BracketingError) as info:
        rs.shoot(3.0, 13, bracket=(0.0, 0.1), r_max=100)
    assert info.value.events == (rs.V_CROSSED_ZERO, rs.V_CROSSED_ZERO)
    with pytest.raises(ValueError):
        rs.shoot(1.5, 13)


@pytest.fixture(scope="module")
def shot():
    return rs.shoot(3.0, 13)


def test_shoot_is_reproducible_under_perturbed_bracket(shot):
    other = rs.shoot(3.0, 13, bracket=(1e-3, 999.0))
    assert abs(other.a_star - shot.a_star) <= 2 * 1e-13 + 4 * np.spacing(shot.a_star)
    radii = [r for _, _, r in shot.history]
    # later iterates survive longer, up to noise of the last few steps
    assert max(radii[-10:]) > 10 * max(radii[:5])
    assert shot.solution.event_radius > 100


def test_csv_columns(shot):
    text = shot.solution.to_csv()
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == rs.CSV_COLUMNS
    assert len(rows) == shot.solution.r.size + 1


def test_restrict(shot):
    sub = shot.solution.restrict(10.0)
    assert sub.r[-1] <= 10.0 and sub.event == rs.REACHED_RMAX
    assert shot.solution.restrict(1e9) is shot.solution


def test_mass_growth_below_bound(shot):
    sol = shot.solution.restrict(shot.trusted_radius)
    assert rs.mass_growth_exponent(sol) <= rs.mass_growth_bound(3.0, 13) + 0.05
