"""Saddle point u0(t) of the large-order Bessel approximation to the inversion integrand.

The saddle-point equation is

    t = log(u) / (2 sqrt(2u)) - rho / sqrt(2u) + 1 / (4u),

and u0(t) is its largest root.  The right-hand side is strictly decreasing on
``log u >= 2 + 2 rho`` (where the curvature M is positive), so the largest root
exists iff the RHS at ``u_c = exp(2 + 2 rho)`` is at least t, and it is then the
unique root in ``[u_c, inf)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NegativeCurvature, NoSaddle, NonConvergence
from .specfun import HwParams

SQRT2 = math.sqrt(2.0)
RESIDUAL_TOL = 1e-12
MAX_ITER = 200
BOOTSTRAP_BELOW = 0.05
LINEAR_POLISH_ABOVE = 1e-8


@dataclass(frozen=True)
class SaddleSolution:
    t: float
    u0: float
    residual: float
    iterations: int
    M_exact: float
    log_u0: float


def saddle_rhs(u, params: HwParams):
    """Right-hand side of the saddle-point equation; works on scalars and arrays."""
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0):
        raise DomainError("saddle_rhs needs u > 0")
    s = np.sqrt(2.0 * u)
    out = np.log(u) / (2.0 * s) - params.rho / s + 1.0 / (4.0 * u)
    return float(out) if out.ndim == 0 else out


def _rhs_log(s: float, rho: float) -> float:
    # saddle_rhs as a function of s = log u, overflow-free for huge u
    e = math.exp(-0.5 * s)
    return (s - 2.0 * rho) * e / (2.0 * SQRT2) + 0.25 * e * e


def _rhs_log_deriv(s: float, rho: float) -> float:
    e = math.exp(-0.5 * s)
    return (1.0 + rho - 0.5 * s) * e / (2.0 * SQRT2) - 0.25 * e * e


def saddle_threshold(params: HwParams) -> float:
    """Largest t for which the saddle exists: the RHS at ``log u = 2 + 2 rho``."""
    return _rhs_log(2.0 + 2.0 * params.rho, params.rho)


def log_u0_bootstrap(t: float, params: HwParams) -> float:
    """Logarithm of :func:`u0_bootstrap`, usable far below the double range of u0."""
    if not 0.0 < t < 1.0:
        raise DomainError(f"bootstrap expansion needs 0 < t < 1, got {t!r}")
    L = math.log(1.0 / t)
    log_lead = 2.0 * math.log(L) - math.log(2.0) - 2.0 * math.log(t)
    if L <= 1.0:
        return log_lead
    corr = 1.0 + 2.0 * math.log(L) / L - (2.0 * params.rho + math.log(2.0)) / L
    if corr <= 0.0:
        return log_lead
    return log_lead + math.log(corr)


def u0_bootstrap(t: float, params: HwParams) -> float:
    """Two-term bootstrap expansion of u0(t).

    ``log(1/t)^2 / (2 t^2) * (1 + 2 loglog(1/t)/log(1/t) - (2 rho + log 2)/log(1/t))``;
    only the leading factor is returned when ``log(1/t) <= 1``.
    """
    if not 0.0 < t < 1.0:
        raise DomainError(f"bootstrap expansion needs 0 < t < 1, got {t!r}")
    L = math.log(1.0 / t)
    lead = math.exp(2.0 * math.log(L) - math.log(2.0) - 2.0 * math.log(t))
    if L <= 1.0:
        return lead
    return lead * (1.0 + 2.0 * math.log(L) / L - (2.0 * params.rho + math.log(2.0)) / L)


def curvature_m(u0: float, params: HwParams) -> float:
    """Curvature M of the exponent at the saddle (coefficient of -y^2).

    Raises NegativeCurvature when ``log u0 <= 2 + 2 rho``.
    """
    if not u0 > 0.0:
        raise DomainError("curvature_m needs u0 > 0")
    log_u0 = math.log(u0)
    if log_u0 - 2.0 - 2.0 * params.rho <= 0.0:
        raise NegativeCurvature(
            f"log u0 - 2 - 2 rho = {log_u0 - 2.0 - 2.0 * params.rho:.3g} <= 0"
        )
    u32 = u0**1.5
    return SQRT2 * log_u0 / (16.0 * u32) - SQRT2 * (1.0 + params.rho) / (8.0 * u32)


def solve_saddle(t: float, params: HwParams, max_iter: int = MAX_ITER) -> SaddleSolution:
    """Largest root u0 of ``saddle_rhs(u) = t``.

    Safeguarded Newton in s = log u on the bracket ``[2 + 2 rho, S]``, where S
    is pushed right (u doubled) until the RHS drops below t.  For t >= 1e-8 a
    final Newton step in linear u polishes the root.
    """
    t = float(t)
    if not (t > 0.0 and math.isfinite(t)):
        raise DomainError(f"t must be positive and finite, got {t!r}")
    rho = params.rho
    lo = 2.0 + 2.0 * rho
    g_lo = _rhs_log(lo, rho) - t
    if g_lo < 0.0:
        raise NoSaddle(
            f"no saddle: t too large (t = {t:.6g} exceeds {saddle_threshold(params):.6g} for r = {params.r:.6g})"
        )
    if g_lo == 0.0:
        raise NegativeCurvature("saddle sits on the zero-curvature boundary")

    guess = log_u0_bootstrap(t, params) if t < BOOTSTRAP_BELOW else lo + 1.0
    guess = max(guess, lo + 1e-3)
    hi = guess
    while _rhs_log(hi, rho) - t >= 0.0:
        lo = hi
        hi += math.log(2.0)
    s = min(max(guess, lo), hi)

    iterations = 0
    while True:
        iterations += 1
        if iterations > max_iter:
            raise NonConvergence(f"saddle solve did not converge in {max_iter} iterations")
        g = _rhs_log(s, rho) - t
        if abs(g) <= RESIDUAL_TOL * t:
            break
        if g > 0.0:
            lo = s
        else:
            hi = s
        step = g / _rhs_log_deriv(s, rho)
        s_new = s - step
        if not lo < s_new < hi:
            s_new = 0.5 * (lo + hi)
        if s_new == s:
            break
        s = s_new

    try:
        u0 = math.exp(s)
    except OverflowError:
        raise DomainError(f"u0 = exp({s:.6g}) overflows; t = {t:.3g} is too small") from None
    if t >= LINEAR_POLISH_ABOVE:
        d = _rhs_log_deriv(s, rho) / u0
        u1 = u0 - (saddle_rhs(u0, params) - t) / d
        if abs(saddle_rhs(u1, params) - t) < abs(saddle_rhs(u0, params) - t):
            u0 = u1
        residual = saddle_rhs(u0, params) - t
        log_u0 = math.log(u0)
    else:
        log_u0 = s
        residual = _rhs_log(s, rho) - t
    return SaddleSolution(
        t=t,
        u0=u0,
        residual=residual,
        iterations=iterations,
        M_exact=curvature_m(u0, params),
        log_u0=log_u0,
    )


def from_sp_identity(sol: SaddleSolution, params: HwParams) -> float:
    """LHS - RHS of ``-sqrt(2 u0) log(u0) / 2 = -2 u0 t - rho sqrt(2 u0) + 1/2``.

    The identity is the saddle equation multiplied by 2 u0, so it vanishes at
    any exact root; a nonzero value flags a bad root.
    """
    u0, t = sol.u0, sol.t
    s = math.sqrt(2.0 * u0)
    lhs = -0.5 * s * sol.log_u0
    rhs = -2.0 * u0 * t - params.rho * s + 0.5
    return lhs - rhs
