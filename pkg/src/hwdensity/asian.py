"""Density of the time integral of geometric Brownian motion.

For ``A_t = int_0^t exp(2 (W_h + nu h)) dh`` Yor's formula gives the density of
A_t at u conditional on ``W_t + nu t = x`` as

    sqrt(2 pi t) / u * exp(x^2/(2t) - (1 + e^{2x})/(2u)) * I_0(e^x/u) * f_{e^x/u}(t),

where f_r is the Hartman-Watson density.  The drift nu enters only through
the law of the endpoint x, so the marginal density mixes over x ~ N(nu t, t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .asymptotics import LogDensity, Method, density_main, density_rough, log_i0
from .errors import DomainError, ToleranceNotMet
from .inversion import ContourSpec, oracle_density, real_line_density
from .quadrature import integrate
from .specfun import HwParams

R_MAX = 1e3
AUTO_THRESHOLD = 0.05
ASIAN_REL_TOL = 1e-8
_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class GbmIntegralQuery:
    t: float
    nu: float
    x: float
    u: float
    density_method: Method = Method.AUTO
    auto_threshold: float = AUTO_THRESHOLD

    def __post_init__(self):
        if not self.t > 0:
            raise DomainError("t must be positive")
        if not self.u > 0:
            raise DomainError("u must be positive")
        object.__setattr__(self, "density_method", Method(self.density_method))
        if self.density_method in (Method.CRUDE, Method.LEVY):
            raise DomainError(f"method {self.density_method.value!r} cannot supply f_r")

    @property
    def resolved_method(self) -> Method:
        if self.density_method is Method.AUTO:
            return Method.ORACLE if self.t >= self.auto_threshold else Method.MAIN
        return self.density_method


ASIAN_CONTOUR = ContourSpec(rel_tol=ASIAN_REL_TOL, max_nodes=40_000)


def hw_log_density(t: float, r: float, method: Method, spec: ContourSpec | None = None) -> float:
    params = HwParams(r)
    if method is Method.ORACLE:
        if spec is None:
            # cheap when well conditioned (moderate t), fails fast otherwise
            try:
                return real_line_density(t, params, ASIAN_REL_TOL).log_value
            except ToleranceNotMet:
                pass
        return oracle_density(t, params, spec or ASIAN_CONTOUR).log_value
    if method is Method.MAIN:
        return density_main(t, params).log_value
    if method is Method.ROUGH:
        return density_rough(t, params).log_value
    raise DomainError(f"unsupported method {method!r}")


def _log_prefactor(t: float, x: float, u: float) -> tuple[float, float]:
    log_r = x - math.log(u)
    if log_r > math.log(R_MAX):
        raise DomainError(
            f"r = e^x/u = exp({log_r:.4g}) exceeds {R_MAX:g}; the Bessel series is not used there"
        )
    r = math.exp(log_r)
    pre = (
        0.5 * (_LOG_2PI + math.log(t))
        - math.log(u)
        + x * x / (2.0 * t)
        - (1.0 + math.exp(2.0 * x)) / (2.0 * u)
        + log_i0(r)
    )
    return r, pre


def conditional_density(q: GbmIntegralQuery, spec: ContourSpec | None = None) -> LogDensity:
    """Density of A_t at q.u given ``W_t + nu t = q.x``."""
    r, pre = _log_prefactor(q.t, q.x, q.u)
    method = q.resolved_method
    return LogDensity(pre + hw_log_density(q.t, r, method, spec), method)


def _gaussian_logpdf(x, mean: float, var: float):
    return -0.5 * (_LOG_2PI + math.log(var)) - (x - mean) ** 2 / (2.0 * var)


def marginal_density(
    t: float,
    nu: float,
    u: float,
    density_method: Method = Method.AUTO,
    n_sd: float = 8.0,
    rel_tol: float = 1e-5,
    max_nodes: int = 3_000,
    spec: ContourSpec | None = None,
) -> LogDensity:
    """Density of A_t at u: Yor's conditional density mixed over x ~ N(nu t, t).

    Adaptive quadrature over ``x in nu t +- n_sd sqrt(t)``, cut at
    ``x = log(R_MAX u)`` beyond which r = e^x/u leaves the Bessel range.
    Nodes where the inversion cancels to noise contribute zero provided the
    inversion's own error bar puts them below ``NEGLIGIBLE``.
    """
    if not t > 0 or not u > 0:
        raise DomainError("t and u must be positive")
    mean, sd = nu * t, math.sqrt(t)
    lo = mean - n_sd * sd
    hi = min(mean + n_sd * sd, math.log(R_MAX * u))
    if not hi > lo:
        raise DomainError(f"u = {u:g} too small: every x in the window gives r > {R_MAX:g}")
    f = marginal_integrand(t, nu, u, density_method, spec)
    res = integrate(f, np.linspace(lo, hi, 5), rel_tol=rel_tol, max_nodes=max_nodes)
    if not res.value > 0:
        raise ToleranceNotMet(f"marginal density quadrature returned {res.value:.3g}")
    return LogDensity(math.log(res.value), Method(density_method), rel_error=res.error / res.value)


NEGLIGIBLE = 1e-14


def marginal_integrand(t: float, nu: float, u: float, density_method=Method.AUTO, spec=None):
    """Vectorized ``x -> p(u | x) phi(x)`` used by :func:`marginal_density`."""

    def f(xs):
        return np.array([math.exp(_log_joint(t, nu, float(x), u, density_method, spec)) for x in xs])

    return f


def _log_joint(t, nu, x, u, density_method, spec) -> float:
    q = GbmIntegralQuery(t, nu, x, u, density_method)
    log_phi = float(_gaussian_logpdf(x, nu * t, t))
    try:
        lc = conditional_density(q, spec).log_value
    except ToleranceNotMet as exc:
        if exc.log_bound is not None:
            _, pre = _log_prefactor(t, x, u)
            if pre + exc.log_bound + log_phi < math.log(NEGLIGIBLE):
                return -math.inf
        raise
    return lc + log_phi
