"""Small-time asymptotic formulas for the Hartman-Watson density f_r(t).

All densities are carried as logarithms; the linear value is attached only
when it is a normal double.  The (1 + O(...)) error factors are dropped.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import DomainError
from .saddle import SaddleSolution, solve_saddle
from .specfun import HwParams, log_bessel_i_array

_LOG_PI = math.log(math.pi)
_LOG_TINY = math.log(2.2250738585072014e-308)
_LOG_HUGE = math.log(1.7976931348623157e308)


class Method(str, enum.Enum):
    MAIN = "main"
    ROUGH = "rough"
    CRUDE = "crude"
    ORACLE = "oracle"
    LEVY = "levy"
    AUTO = "auto"


@dataclass(frozen=True)
class LogDensity:
    """A positive density value stored as its logarithm.

    ``value`` is ``exp(log_value)`` when that is a normal double, else None.
    ``rel_error`` is the quadrature error estimate for oracle values.
    """

    log_value: float
    method: Method
    rel_error: float | None = None
    value: float | None = field(init=False)

    def __post_init__(self):
        lv = float(self.log_value)
        if not math.isfinite(lv):
            raise DomainError(f"log density must be finite, got {lv}")
        object.__setattr__(self, "log_value", lv)
        object.__setattr__(self, "method", Method(self.method))
        value = math.exp(lv) if _LOG_TINY < lv < _LOG_HUGE else None
        object.__setattr__(self, "value", value)


@lru_cache(maxsize=4096)
def log_i0(r: float) -> float:
    """log I_0(r) from the ascending series."""
    return float(log_bessel_i_array(0.0, r)[0].real)


def _log_one_over_t(t: float) -> float:
    if not 0.0 < t < 1.0:
        raise DomainError(f"expansion needs 0 < t < 1, got {t!r}")
    return math.log(1.0 / t)


def density_main(t: float, params: HwParams, sol: SaddleSolution | None = None) -> LogDensity:
    """Leading term of f_r(t) in its sharp form.

    ``sqrt(e) / (pi I0(r)) * sqrt(u0 / (log u0 - 2 - 2 rho)) * exp(-t u0 + sqrt(2 u0))``,
    with relative error O(sqrt(t) log(1/t)^2).
    """
    sol = sol if sol is not None else solve_saddle(t, params)
    margin = sol.log_u0 - 2.0 - 2.0 * params.rho
    log_value = (
        0.5
        - _LOG_PI
        - log_i0(params.r)
        + 0.5 * (sol.log_u0 - math.log(margin))
        - sol.t * sol.u0
        + math.sqrt(2.0 * sol.u0)
    )
    return LogDensity(log_value, Method.MAIN)


def density_saddle_form(sol: SaddleSolution, params: HwParams) -> float:
    """log of the saddle-point approximation before the saddle equation is used.

    ``2^(-7/4) / (pi I0(r)) * M^(-1/2) u0^(-1/4)
    * exp(u0 t - sqrt(2 u0) log(u0) / 2 + sqrt(2) (1 + rho) sqrt(u0))``.
    Algebraically identical to :func:`density_main` at an exact root.
    """
    u0 = sol.u0
    return (
        -1.75 * math.log(2.0)
        - _LOG_PI
        - log_i0(params.r)
        - 0.5 * math.log(sol.M_exact)
        - 0.25 * sol.log_u0
        + u0 * sol.t
        - 0.5 * math.sqrt(2.0 * u0) * sol.log_u0
        + math.sqrt(2.0) * (1.0 + params.rho) * math.sqrt(u0)
    )


def density_rough(t: float, params: HwParams, sol: SaddleSolution | None = None) -> LogDensity:
    """Simplified leading term ``sqrt(e)/(2 pi I0(r)) * log(1/t)^(1/2) / t * exp(-t u0 + sqrt(2 u0))``.

    Its relative error is only O(loglog(1/t) / log(1/t)).
    """
    L = _log_one_over_t(t)
    sol = sol if sol is not None else solve_saddle(t, params)
    log_value = (
        0.5
        - math.log(2.0)
        - _LOG_PI
        - log_i0(params.r)
        + 0.5 * math.log(L)
        - math.log(t)
        - sol.t * sol.u0
        + math.sqrt(2.0 * sol.u0)
    )
    return LogDensity(log_value, Method.ROUGH)


def exponent_expansion(t: float, params: HwParams) -> float:
    """Three-term expansion of ``-t u0 + sqrt(2 u0)`` for t in (0, 1/e)."""
    L = _log_one_over_t(t)
    if L <= 1.0:
        raise DomainError("exponent expansion needs log(1/t) > 1, i.e. t < 1/e")
    return (
        -L * L / (2.0 * t)
        - L * math.log(L) / t
        + (1.0 + params.rho + 0.5 * math.log(2.0)) * L / t
    )


def log_density_crude(t: float) -> float:
    """``-log(1/t)^2 / (2t)``, the r-independent leading behaviour of log f_r(t)."""
    L = _log_one_over_t(t)
    return -L * L / (2.0 * t)


def levy_density(t: float) -> LogDensity:
    """Levy (stable, index 1/2) density ``exp(-1/(2t)) / sqrt(2 pi t^3)``."""
    if not t > 0.0:
        raise DomainError(f"t must be positive, got {t!r}")
    log_value = -0.5 * math.log(2.0 * math.pi) - 1.5 * math.log(t) - 0.5 / t
    return LogDensity(log_value, Method.LEVY)
