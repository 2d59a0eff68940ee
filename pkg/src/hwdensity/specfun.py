"""Special functions evaluated in log space.

The Hartman-Watson transform needs I_nu(r) for complex orders nu = sqrt(2u)
with |u| up to ~1e12, where both I_nu(r) and Gamma(nu + 1) leave the double
range by hundreds of orders of magnitude.  Everything here therefore returns
logarithms; complex logs carry an unreduced phase internally and are only
reduced to the principal branch when wrapped in :class:`LogComplex`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .errors import DomainError, NonConvergence, PoleError

SERIES_REL_CUTOFF = 1e-18
SERIES_MAX_TERMS = 10_000
_BLOCK = 32
_LOG_CUTOFF = math.log(SERIES_REL_CUTOFF)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _principal(phase: float) -> float:
    p = math.remainder(phase, 2.0 * math.pi)
    return math.pi if p <= -math.pi else p


@dataclass(frozen=True)
class LogComplex:
    """The complex number ``exp(log_modulus) * exp(1j * phase)``."""

    log_modulus: float
    phase: float

    def __post_init__(self):
        object.__setattr__(self, "log_modulus", float(self.log_modulus))
        object.__setattr__(self, "phase", _principal(float(self.phase)))

    @classmethod
    def from_log(cls, z: complex) -> "LogComplex":
        z = complex(z)
        return cls(z.real, z.imag)

    @property
    def log(self) -> complex:
        return complex(self.log_modulus, self.phase)

    @property
    def value(self) -> complex:
        """Linear value; overflows to inf (or underflows to 0) outside double range."""
        with np.errstate(over="ignore", under="ignore"):
            mod = float(np.exp(self.log_modulus))
        return complex(mod * math.cos(self.phase), mod * math.sin(self.phase))

    def conjugate(self) -> "LogComplex":
        return LogComplex(self.log_modulus, -self.phase)


@dataclass(frozen=True)
class HwParams:
    """Hartman-Watson parameter ``r`` and the derived ``rho = log(r / (2 sqrt 2))``."""

    r: float
    rho: float = field(init=False)

    def __post_init__(self):
        r = float(self.r)
        if not (r > 0.0 and math.isfinite(r)):
            raise DomainError(f"r must be positive and finite, got {self.r!r}")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "rho", math.log(r / (2.0 * math.sqrt(2.0))))


def _check_gamma_arg(z: np.ndarray) -> None:
    near_real = np.abs(z.imag) <= 1e-14 * np.maximum(1.0, np.abs(z.real))
    rounded = np.round(z.real)
    pole = near_real & (rounded <= 0) & (np.abs(z.real - rounded) <= 1e-14 * np.maximum(1.0, np.abs(z.real)))
    if np.any(pole):
        bad = z[pole][0]
        raise PoleError(f"log-gamma has a pole at z = {bad}")


def loggamma_array(z) -> np.ndarray:
    """Complex log-gamma on arrays, analytic continuation of the real log (unreduced phase)."""
    z = np.asarray(z, dtype=complex)
    _check_gamma_arg(np.atleast_1d(z))
    return special.loggamma(z)


def log_gamma_complex(z: complex) -> LogComplex:
    """log Gamma(z) with principal phase.

    Raises PoleError when z is (numerically) a non-positive integer.
    """
    return LogComplex.from_log(complex(loggamma_array(complex(z))))


def log_bessel_i_array(nu, r: float) -> np.ndarray:
    """Vectorized log I_nu(r) by the ascending series, phase left unreduced.

    Terms are generated by the ratio
    ``t_{k+1} / t_k = (r/2)^2 / ((k + 1)(k + 1 + nu))`` starting from
    ``t_0 = (r/2)^nu / Gamma(nu + 1)`` and accumulated against a running
    log-scale, so that neither the terms nor the partial sums overflow.
    """
    if not r > 0.0:
        raise DomainError(f"Bessel argument must be positive, got {r!r}")
    nu = np.atleast_1d(np.asarray(nu, dtype=complex))
    if np.any(nu.real < -1e-12):
        raise DomainError("log_bessel_i requires Re(nu) >= 0")
    shape = nu.shape
    nu = nu.ravel()
    log_half_sq = 2.0 * math.log(r / 2.0)

    log_t0 = nu * math.log(r / 2.0) - special.loggamma(nu + 1.0)
    scale = np.zeros(nu.size)                 # partial sum = exp(scale) * acc, relative to t0
    acc = np.ones(nu.size, dtype=complex)
    last = np.zeros(nu.size, dtype=complex)   # log of the most recent term, relative to t0
    active = np.ones(nu.size, dtype=bool)

    k0 = 0
    while np.any(active):
        if k0 >= SERIES_MAX_TERMS:
            raise NonConvergence(
                f"Bessel series did not converge in {SERIES_MAX_TERMS} terms (r={r})"
            )
        idx = np.flatnonzero(active)
        ks = np.arange(k0 + 1, k0 + _BLOCK + 1, dtype=float)
        ratios = log_half_sq - np.log(ks)[None, :] - np.log(ks[None, :] + nu[idx, None])
        logs = last[idx, None] + np.cumsum(ratios, axis=1)

        new_scale = np.maximum(scale[idx], logs.real.max(axis=1))
        acc[idx] = acc[idx] * np.exp(scale[idx] - new_scale) + np.exp(
            logs - new_scale[:, None]
        ).sum(axis=1)
        scale[idx] = new_scale
        last[idx] = logs[:, -1]

        log_partial = scale[idx] + np.log(np.abs(acc[idx]))
        decreasing = ratios[:, -1].real < 0.0
        done = decreasing & (logs[:, -1].real < log_partial + _LOG_CUTOFF)
        active[idx[done]] = False
        k0 += _BLOCK

    return (log_t0 + scale + np.log(acc)).reshape(shape)


def log_bessel_i(nu: complex, r: float) -> LogComplex:
    """log I_nu(r) for complex order with Re(nu) >= 0 and real r > 0."""
    return LogComplex.from_log(complex(log_bessel_i_array(complex(nu), r)[0]))


def log_bessel_i_asymptotic_array(nu, r: float) -> np.ndarray:
    nu = np.asarray(nu, dtype=complex)
    log_nu = np.log(nu)
    return nu * math.log(r / 2.0) + nu - (nu + 0.5) * log_nu - _HALF_LOG_2PI


def log_bessel_i_asymptotic(nu: complex, r: float) -> LogComplex:
    """Leading large-order term ``(r/2)^nu e^nu nu^(-nu-1/2) / sqrt(2 pi)`` of I_nu(r).

    Valid for |nu| -> infinity with arg(nu) bounded away from +-pi; only the
    first coefficient of the expansion is used, so the relative error is O(1/|nu|).
    """
    nu = complex(nu)
    if not r > 0.0:
        raise DomainError(f"Bessel argument must be positive, got {r!r}")
    if abs(nu) < 10.0:
        raise DomainError(f"large-order form needs |nu| >= 10, got |nu| = {abs(nu):.3g}")
    if abs(np.angle(nu)) > math.pi - 0.1:
        raise DomainError("large-order form needs arg(nu) at least 0.1 rad away from +-pi")
    return LogComplex.from_log(complex(log_bessel_i_asymptotic_array(nu, r)))
