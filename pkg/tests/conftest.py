"""Shared arbitrary-precision oracles (mpmath) for the test suite."""

import math

import mpmath as mp
import pytest

from hwdensity import HwParams

mp.mp.dps = 40

R_GRID = (0.5, 1.0, 2.0 * math.sqrt(2.0), 5.0)
T_GRID = (0.05, 0.01, 1e-3, 1e-4, 1e-6)


def mp_log_bessel_i(nu, r):
    """Complex log I_nu(r) by mpmath, phase in (-pi, pi]."""
    v = mp.besseli(mp.mpc(nu), mp.mpf(r))
    return float(mp.log(abs(v))), float(mp.arg(v))


def mp_hw_density(r, t, dps=30):
    """f_r(t) from Yor's real-line integral, evaluated in high precision."""
    with mp.workdps(dps):
        r, t = mp.mpf(r), mp.mpf(t)

        def g(x):
            return mp.exp(-x * x / (2 * t) - r * mp.cosh(x)) * mp.sinh(x) * mp.sin(mp.pi * x / t)

        pts = [0] + [k * t for k in range(1, 60)]
        integral = mp.quad(g, pts)
        val = r / mp.sqrt(2 * mp.pi**3 * t) * mp.exp(mp.pi**2 / (2 * t)) * integral / mp.besseli(0, r)
        return float(mp.log(val))


def mp_saddle_root(r, t, lo, hi):
    """Bisection in 50 digits on the saddle equation over [lo, hi]."""
    with mp.workdps(50):
        rho = mp.log(mp.mpf(r) / (2 * mp.sqrt(2)))

        def g(u):
            return mp.log(u) / (2 * mp.sqrt(2 * u)) - rho / mp.sqrt(2 * u) + 1 / (4 * u) - t

        lo, hi = mp.mpf(lo), mp.mpf(hi)
        assert g(lo) > 0 > g(hi)
        for _ in range(200):
            mid = (lo + hi) / 2
            if g(mid) > 0:
                lo = mid
            else:
                hi = mid
        return float((lo + hi) / 2)


@pytest.fixture
def r1():
    return HwParams(1.0)


ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
