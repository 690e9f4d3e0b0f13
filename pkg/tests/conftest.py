import mpmath
import pytest


def mp_largest_real_root(coeffs_desc, dps=40):
    """Independent oracle: high-precision companion roots via mpmath.polyroots."""
    with mpmath.workdps(dps):
        roots = mpmath.polyroots(coeffs_desc, maxsteps=400, extraprec=400)
        real = [mpmath.re(r) for r in roots if abs(mpmath.im(r)) < mpmath.mpf(10) ** (-dps // 2)]
        return float(max(real)) if real else None


@pytest.fixture
def oracle_root():
    return mp_largest_real_root
