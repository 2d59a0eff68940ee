import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import R_GRID, T_GRID, mp_saddle_root
from hwdensity import (
    DomainError,
    HwParams,
    NegativeCurvature,
    NoSaddle,
    curvature_m,
    from_sp_identity,
    saddle_rhs,
    solve_saddle,
    u0_bootstrap,
)
from hwdensity.saddle import log_u0_bootstrap, saddle_threshold

SQRT2 = math.sqrt(2.0)
RHO0 = HwParams(2 * SQRT2)


class TestRhs:
    def test_closed_forms(self):
        assert saddle_rhs(1.0, RHO0) == pytest.approx(0.25, rel=1e-15)
        e2 = math.exp(2.0)
        assert saddle_rhs(e2, RHO0) == pytest.approx(1 / (SQRT2 * math.e) + 1 / (4 * e2), rel=1e-14)

    def test_r1_at_1000(self, r1):
        assert saddle_rhs(1000.0, r1) == pytest.approx(0.10073, abs=5e-6)

    def test_vectorized(self, r1):
        out = saddle_rhs([1.0, 10.0, 100.0], r1)
        assert out.shape == (3,)
        assert out[1] == saddle_rhs(10.0, r1)

    def test_rejects_nonpositive(self, r1):
        with pytest.raises(DomainError):
            saddle_rhs(0.0, r1)


class TestSolve:
    def test_r1_t01_against_bisection(self, r1):
        sol = solve_saddle(0.1, r1)
        ref = mp_saddle_root(1.0, 0.1, 1e2, 1e4)
        assert sol.u0 == pytest.approx(ref, rel=1e-13)
        assert sol.u0 == pytest.approx(1018.8055, rel=1e-7)
        assert abs(sol.residual) <= 1e-13

    @pytest.mark.parametrize("r", R_GRID)
    @pytest.mark.parametrize("t", T_GRID)
    def test_grid_invariants(self, r, t):
        p = HwParams(r)
        sol = solve_saddle(t, p)
        assert abs(saddle_rhs(sol.u0, p) - t) <= 1e-12 * t
        assert sol.log_u0 - 2 - 2 * p.rho > 0 and sol.M_exact > 0
        assert abs(from_sp_identity(sol, p)) <= 1e-9 * (1 + 2 * sol.u0 * t)
        # largest root: RHS is decreasing through u0
        lo, hi = saddle_rhs(sol.u0 * (1 - 1e-4), p), saddle_rhs(sol.u0 * (1 + 1e-4), p)
        assert hi < lo

    @pytest.mark.parametrize("r", R_GRID)
    def test_monotone_in_t(self, r):
        p = HwParams(r)
        u = [solve_saddle(t, p).u0 for t in T_GRID]
        assert all(b > a for a, b in zip(u, u[1:]))

    def test_no_saddle(self, r1):
        with pytest.raises(NoSaddle, match="no saddle: t too large"):
            solve_saddle(10.0, r1)
        thr = saddle_threshold(r1)
        assert thr == pytest.approx(2 / math.e + 2 / math.e**2, rel=1e-14)
        solve_saddle(0.999 * thr, r1)
        with pytest.raises(NoSaddle):
            solve_saddle(1.001 * thr, r1)

    def test_extreme_t(self, r1):
        sol = solve_saddle(1e-50, r1)
        assert math.isfinite(sol.u0)
        assert sol.u0 == pytest.approx(7.27399e103, rel=1e-5)
        assert abs(sol.residual) <= 1e-12 * 1e-50

    def test_leading_order_trend(self, r1):
        ratios = []
        for t in (1e-2, 1e-3, 1e-4):
            L = math.log(1 / t)
            ratios.append(solve_saddle(t, r1).u0 * 2 * t * t / L**2)
        assert all(abs(b - 1) < abs(a - 1) for a, b in zip(ratios, ratios[1:]))

    def test_rejects_bad_t(self, r1):
        for t in (0.0, -1.0, math.inf, math.nan):
            with pytest.raises(DomainError):
                solve_saddle(t, r1)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.05, 20), st.floats(-40, -3))
    def test_root_property(self, r, log10_t):
        p = HwParams(r)
        t = 10.0**log10_t
        if t >= saddle_threshold(p):
            return
        sol = solve_saddle(t, p)
        assert abs(sol.residual) <= 1e-12 * t


class TestBootstrap:
    def test_substitution_example(self):
        # 2 rho + log 2 = 0 at r = 2, and loglog(1/t) = 1 at t = e^-e
        p = HwParams(2.0)
        t = math.exp(-math.e)
        expected = math.exp(2 * math.e) * math.e**2 / 2 * (1 + 2 / math.e)
        assert u0_bootstrap(t, p) == pytest.approx(expected, rel=1e-13)

    def test_convergence(self, r1):
        errs = [abs(u0_bootstrap(t, r1) / solve_saddle(t, r1).u0 - 1) for t in (1e-2, 1e-3, 1e-4, 1e-6)]
        assert all(b < a for a, b in zip(errs, errs[1:]))
        assert errs[-1] < 0.25

    def test_extreme_t(self, r1):
        L = 50 * math.log(10)
        assert math.isfinite(u0_bootstrap(1e-50, r1))
        assert log_u0_bootstrap(1e-50, r1) == pytest.approx(
            2 * math.log(L) - math.log(2) + 100 * math.log(10), rel=1e-2
        )

    def test_leading_only_above_inverse_e(self, r1):
        t = 0.5
        assert u0_bootstrap(t, r1) == pytest.approx(math.log(2) ** 2 / (2 * t * t))

    @pytest.mark.parametrize("t", [0.0, 1.0, 2.0])
    def test_domain(self, r1, t):
        with pytest.raises(DomainError):
            u0_bootstrap(t, r1)


class TestCurvature:
    def test_factored_identity(self):
        for r in R_GRID:
            p = HwParams(r)
            for t in T_GRID:
                u0 = solve_saddle(t, p).u0
                factored = SQRT2 / (16 * u0**1.5) * (math.log(u0) - 2 - 2 * p.rho)
                assert curvature_m(u0, p) == pytest.approx(factored, rel=1e-13)

    def test_substitution(self):
        assert curvature_m(math.exp(4), RHO0) == pytest.approx(SQRT2 / (8 * math.exp(6)), rel=1e-13)

    def test_boundary(self, r1):
        with pytest.raises(NegativeCurvature):
            curvature_m(math.exp(2 + 2 * r1.rho), r1)
        with pytest.raises(NegativeCurvature):
            curvature_m(1.0, RHO0)

    def test_expansion_trend(self, r1):
        vals = []
        for t in (1e-2, 1e-3, 1e-4):
            L = math.log(1 / t)
            vals.append(solve_saddle(t, r1).M_exact * 2 * L * L / t**3)
        assert vals == pytest.approx([0.345, 0.438, 0.505], abs=2e-3)
        assert all(abs(b - 1) < abs(a - 1) for a, b in zip(vals, vals[1:]))


class TestFromSp:
    def test_detects_non_roots(self, r1):
        sol = solve_saddle(0.01, r1)
        bumped = type(sol)(sol.t, sol.u0 * (1 + 1e-3), 0.0, 0, sol.M_exact, math.log(sol.u0 * (1 + 1e-3)))
        d = from_sp_identity(bumped, r1)
        assert abs(d) > 1e-5 * sol.t * sol.u0

    def test_rho_zero(self):
        sol = solve_saddle(0.05, RHO0)
        assert abs(from_sp_identity(sol, RHO0)) <= 1e-9 * (1 + 2 * sol.u0 * sol.t)
