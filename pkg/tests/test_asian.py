import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import mp_hw_density
from hwdensity import DomainError, GbmIntegralQuery, Method, NoSaddle, ToleranceNotMet, conditional_density, marginal_density
from hwdensity.asian import R_MAX
from hwdensity.asymptotics import log_i0
from hwdensity.quadrature import integrate


def conditional_mass(t, x, u_hi=50.0):
    lo = max(1e-4, math.exp(x) / R_MAX)

    def f(s):
        return np.array([
            math.exp(conditional_density(GbmIntegralQuery(t, 0.0, x, math.exp(si))).log_value + si) for si in s
        ])

    return integrate(f, np.linspace(math.log(lo), math.log(u_hi), 9), rel_tol=1e-6).value


class TestQuery:
    def test_validation(self):
        with pytest.raises(DomainError, match="u must be positive"):
            GbmIntegralQuery(1.0, 0.0, 0.0, -1.0)
        with pytest.raises(DomainError):
            GbmIntegralQuery(0.0, 0.0, 0.0, 1.0)
        with pytest.raises(DomainError):
            GbmIntegralQuery(1.0, 0.0, 0.0, 1.0, Method.CRUDE)

    def test_auto(self):
        assert GbmIntegralQuery(0.05, 0, 0, 1).resolved_method is Method.ORACLE
        assert GbmIntegralQuery(0.049, 0, 0, 1).resolved_method is Method.MAIN
        assert GbmIntegralQuery(0.049, 0, 0, 1, auto_threshold=0.01).resolved_method is Method.ORACLE
        assert GbmIntegralQuery(1, 0, 0, 1, "rough").resolved_method is Method.ROUGH


class TestConditional:
    def test_assembly(self):
        d = conditional_density(GbmIntegralQuery(1.0, 0.0, 0.0, 1.0))
        expected = 0.5 * math.log(2 * math.pi) - 1.0 + log_i0(1.0) + mp_hw_density(1.0, 1.0)
        assert d.log_value == pytest.approx(expected, rel=1e-10)

    @pytest.mark.parametrize("t,x", [(1.0, 0.0), (0.5, 0.0), (1.0, 0.5)])
    def test_normalization(self, t, x):
        assert conditional_mass(t, x) == pytest.approx(1.0, abs=1e-2)

    def test_mass_below_cutoff_negligible(self):
        # below u = e^x / R_MAX the density is far below double resolution
        d = conditional_density(GbmIntegralQuery(1.0, 0.0, 0.0, 0.05))
        assert d.log_value < math.log(1e-13)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(-3, 3), st.floats(-1, 1), st.floats(0.2, 10))
    def test_nu_independence(self, nu, x, u):
        a = conditional_density(GbmIntegralQuery(1.0, 0.0, x, u))
        b = conditional_density(GbmIntegralQuery(1.0, nu, x, u))
        assert a.log_value == b.log_value

    def test_r_too_large(self):
        with pytest.raises(DomainError, match="exceeds"):
            conditional_density(GbmIntegralQuery(1.0, 0.0, 0.0, 1e-4))

    def test_method_consistency_where_both_exist(self):
        q = dict(t=0.05, nu=0.0, x=0.0, u=1.0)
        a = conditional_density(GbmIntegralQuery(**q, density_method=Method.ORACLE)).log_value
        b = conditional_density(GbmIntegralQuery(**q, density_method=Method.MAIN)).log_value
        assert abs(a - b) <= 0.1 * abs(a)

    @pytest.mark.parametrize("u", [0.01, 0.02])
    def test_both_methods_unavailable_at_large_r(self, u):
        # r = 1/u = 100 or 50: the saddle threshold is below t = 0.05
        with pytest.raises(NoSaddle):
            conditional_density(GbmIntegralQuery(0.05, 0.0, 0.0, u, Method.MAIN))
        # and the density is so far below the contour peak that the inversion cancels to noise
        with pytest.raises(ToleranceNotMet):
            conditional_density(GbmIntegralQuery(0.05, 0.0, 0.0, u, Method.ORACLE))


class TestMarginal:
    def test_left_tail(self):
        small = marginal_density(1.0, 0.0, 1e-3)
        mid = marginal_density(1.0, 0.0, 0.5)
        assert math.isfinite(small.log_value) and small.log_value < mid.log_value

    def test_refinement(self):
        a = marginal_density(1.0, 0.0, 1.0)
        b = marginal_density(1.0, 0.0, 1.0, rel_tol=1e-7, max_nodes=6000)
        assert abs(math.expm1(a.log_value - b.log_value)) <= 1e-5

    def test_drift_shifts_mass_right(self):
        assert marginal_density(1.0, 1.0, 10.0).log_value > marginal_density(1.0, 0.0, 10.0).log_value

    def test_domain(self):
        with pytest.raises(DomainError):
            marginal_density(1.0, 0.0, -1.0)
        with pytest.raises(DomainError):
            marginal_density(1.0, 0.0, 1e-9)

    @pytest.mark.slow
    def test_normalization(self):
        def f(s):
            return np.array([math.exp(marginal_density(1.0, 0.0, math.exp(si)).log_value + si) for si in s])

        res = integrate(f, np.linspace(math.log(1e-3), math.log(1e3), 5), rel_tol=1e-4)
        assert res.value == pytest.approx(1.0, abs=2e-2)
