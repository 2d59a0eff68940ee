"""Numerical Bromwich inversion of the Hartman-Watson Laplace transform.

The density is recovered from

    f_r(t) = (1/pi) * int_0^Y Re[ exp((a + iy) t) * L(a + iy) ] dy,
    L(u)   = I_{sqrt(2u)}(r) / I_0(r),

with the contour abscissa ``a`` placed at the saddle point so the integrand
concentrates.  The integrand is scaled by its value at y = 0 before
integration, which keeps e^{-1000}-sized densities inside double range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize

from .asymptotics import LogDensity, Method, log_i0
from .errors import DomainError, HWError, ToleranceNotMet
from .quadrature import integrate
from .saddle import solve_saddle
from .specfun import HwParams, LogComplex, log_bessel_i_array

TRUNCATION_DROP = 40.0
DEFAULT_REL_TOL = 1e-10
DEFAULT_MAX_NODES = 400_000
_MAX_INITIAL_PANELS = 4096

LogTransform = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ContourSpec:
    """Vertical contour ``Re(u) = abscissa`` truncated at ``|Im(u)| <= half_width``.

    ``None`` for abscissa or half_width selects the automatic choice: the
    saddle point, and the point where the integrand has dropped by e^-40.
    """

    abscissa: float | None = None
    half_width: float | None = None
    rel_tol: float = DEFAULT_REL_TOL
    max_nodes: int = DEFAULT_MAX_NODES

    def __post_init__(self):
        if self.abscissa is not None and not self.abscissa > 0:
            raise DomainError("contour abscissa must be positive")
        if self.half_width is not None and not self.half_width > 0:
            raise DomainError("contour half_width must be positive")
        if not 0.0 < self.rel_tol < 1.0:
            raise DomainError("rel_tol must lie in (0, 1)")
        if self.max_nodes < 15:
            raise DomainError("max_nodes must allow at least one panel")


@dataclass(frozen=True)
class InversionResult:
    log_value: float
    rel_error: float
    abscissa: float
    half_width: float
    n_evals: int


def hw_log_transform(r: float) -> LogTransform:
    """``u -> log(I_{sqrt(2u)}(r) / I_0(r))`` on arrays, principal sqrt."""
    li0 = log_i0(r)

    def log_transform(u):
        return log_bessel_i_array(np.sqrt(2.0 * np.asarray(u, dtype=complex)), r) - li0

    return log_transform


def levy_log_transform(u):
    return -np.sqrt(2.0 * np.asarray(u, dtype=complex))


def transform_integrand(u: complex, t: float, params: HwParams) -> LogComplex:
    """log of ``e^{ut} I_{sqrt(2u)}(r) / I_0(r)`` for Re(u) > 0."""
    u = complex(u)
    if not u.real > 0:
        raise DomainError("transform_integrand needs Re(u) > 0")
    val = u * t + complex(hw_log_transform(params.r)(np.array([u]))[0])
    return LogComplex.from_log(val)


def real_saddle(log_transform: LogTransform, t: float) -> float:
    """Minimizer over u > 0 of ``u t + log L(u)`` (L real on the positive axis).

    For the transform of a positive density this is convex in u, and the
    minimizer is the abscissa where the Bromwich integrand is most concentrated.
    """
    def phi(s):
        u = math.exp(s)
        return u * t + float(log_transform(np.array([u]))[0].real)

    lo, hi = -40.0, 2.0 * math.log(1.0 / t) + 40.0 if t < 1 else 40.0
    res = optimize.minimize_scalar(phi, bounds=(lo, hi), method="bounded",
                                   options={"xatol": 1e-10})
    return math.exp(res.x)


def default_abscissa(t: float, params: HwParams) -> float:
    """u0(t) when the saddle-point equation has a root, else the true real saddle."""
    try:
        return solve_saddle(t, params).u0
    except HWError:
        return real_saddle(hw_log_transform(params.r), t)


def _scaled_integrand(log_transform: LogTransform, t: float, a: float):
    peak = a * t + float(log_transform(np.array([a], dtype=complex))[0].real)

    def log_mod(y):
        u = a + 1j * np.asarray(y, dtype=float)
        return u * t + log_transform(u) - peak

    def g(y):
        z = log_mod(y)
        with np.errstate(under="ignore"):
            return np.exp(z.real) * np.cos(z.imag)

    return peak, log_mod, g


def _find_half_width(log_mod, a: float) -> float:
    y = 1e-3 * max(a, 1.0)
    for _ in range(2000):
        probe = np.array([y, 2.0 * y, 4.0 * y])
        if np.all(log_mod(probe).real < -TRUNCATION_DROP):
            return y
        y *= 2.0
        if y > 1e300:
            break
    raise ToleranceNotMet("could not locate a truncation point for the contour integral")


def bromwich_invert(
    log_transform: LogTransform,
    t: float,
    abscissa: float,
    spec: ContourSpec = ContourSpec(),
) -> InversionResult:
    """Invert ``exp(log_transform)`` at t along ``Re(u) = abscissa``."""
    if not t > 0:
        raise DomainError(f"t must be positive, got {t!r}")
    peak, log_mod, g = _scaled_integrand(log_transform, t, abscissa)
    Y = spec.half_width if spec.half_width is not None else _find_half_width(log_mod, abscissa)
    n0 = int(min(_MAX_INITIAL_PANELS, max(32, math.ceil(Y * t / math.pi) + 32)))
    n0 = max(1, min(n0, spec.max_nodes // 60))
    res = integrate(g, np.linspace(0.0, Y, n0 + 1), rel_tol=spec.rel_tol,
                    max_nodes=spec.max_nodes, raise_on_failure=False)
    if not res.value > 0.0 or res.error > spec.rel_tol * res.value:
        raise ToleranceNotMet(
            f"contour integral {res.value:.6g} with error {res.error:.3g} "
            f"misses rel_tol {spec.rel_tol:g} ({res.n_evals} evaluations)",
            log_bound=peak + math.log(max(abs(res.value) + res.error, 1e-300) / math.pi),
        )
    return InversionResult(
        log_value=peak + math.log(res.value / math.pi),
        rel_error=res.error / res.value,
        abscissa=abscissa,
        half_width=Y,
        n_evals=res.n_evals,
    )


def oracle_density(t: float, params: HwParams, spec: ContourSpec = ContourSpec()) -> LogDensity:
    """f_r(t) by numerical Laplace inversion along the saddle contour."""
    a = spec.abscissa if spec.abscissa is not None else default_abscissa(t, params)
    res = bromwich_invert(hw_log_transform(params.r), t, a, spec)
    return LogDensity(res.log_value, Method.ORACLE, rel_error=res.rel_error)


def levy_oracle(t: float, spec: ContourSpec = ContourSpec()) -> LogDensity:
    """Levy density recovered from its transform ``exp(-sqrt(2u))`` by the same engine."""
    if not t > 0:
        raise DomainError(f"t must be positive, got {t!r}")
    a = spec.abscissa if spec.abscissa is not None else 1.0 / (2.0 * t * t)
    res = bromwich_invert(levy_log_transform, t, a, spec)
    return LogDensity(res.log_value, Method.ORACLE, rel_error=res.rel_error)


def real_line_density(t: float, params: HwParams, rel_tol: float = 1e-8) -> LogDensity:
    """f_r(t) from Yor's real-line integral for the Hartman-Watson density.

        f_r(t) = r exp(pi^2 / 2t) / (I_0(r) sqrt(2 pi^3 t))
                 * int_0^inf exp(-xi^2/2t - r cosh xi) sinh(xi) sin(pi xi / t) dxi

    Well conditioned for moderate t and any r (the right tail, where the
    vertical contour cancels to noise); for small t the sine oscillations
    cancel against the exp(pi^2 / 2t) factor and ToleranceNotMet is raised.
    """
    r = params.r

    def log_env(xi):
        # r (cosh xi - 1) = 2 r sinh(xi/2)^2
        with np.errstate(divide="ignore", over="ignore"):
            return -xi * xi / (2.0 * t) - 2.0 * r * np.sinh(0.5 * xi) ** 2 + np.log(np.sinh(xi))

    upper = min(math.sqrt(200.0 * t) + 2.0 * t, math.acosh(1.0 + 100.0 / r)) + 1.0
    grid = np.linspace(0.0, upper, 2001)[1:]
    env = log_env(grid)
    top = env.max()
    beyond = np.flatnonzero((env < top - 45.0) & (grid > grid[env.argmax()]))
    xi_max = grid[beyond[0]] if beyond.size else grid[-1]

    def g(xi):
        with np.errstate(under="ignore"):
            return np.exp(log_env(xi) - top) * np.sin(math.pi * xi / t)

    n0 = int(min(_MAX_INITIAL_PANELS, max(16, math.ceil(xi_max / t))))
    res = integrate(g, np.linspace(0.0, xi_max, n0 + 1), rel_tol=rel_tol,
                    max_nodes=20_000, raise_on_failure=False)
    log_pre = (math.log(r) + math.pi**2 / (2.0 * t) - log_i0(r) - r
               - 0.5 * math.log(2.0 * math.pi**3 * t) + top)
    if not res.value > 0.0 or res.error > rel_tol * res.value:
        raise ToleranceNotMet(
            f"real-line integral {res.value:.6g} with error {res.error:.3g} misses rel_tol {rel_tol:g}",
            log_bound=log_pre + math.log(max(abs(res.value) + res.error, 1e-300)),
        )
    return LogDensity(log_pre + math.log(res.value), Method.ORACLE, rel_error=res.error / res.value)


def gaussian_window(M: float, h: float, rel_tol: float = 1e-13) -> float:
    """``int_{-h}^{h} exp(-M y^2) dy`` by quadrature."""
    res = integrate(lambda y: np.exp(-M * y * y), np.linspace(0.0, h, 33), rel_tol=rel_tol)
    return 2.0 * res.value


# -- tail monotonicity --------------------------------------------------------

TAIL_THRESHOLD = 12.0


def tail_exponent(u, B: float):
    """``-Re(sqrt(u) log u + B sqrt(u))``: the u-dependent part of the integrand's log-modulus."""
    su = np.sqrt(np.asarray(u, dtype=complex))
    return -(su * np.log(u) + B * su).real


def tail_slope(u: complex, B: float, rel_step: float = 1e-6) -> float:
    """Centered finite difference of :func:`tail_exponent` in Im(u) at fixed Re(u)."""
    u = complex(u)
    h = rel_step * abs(u)
    return float((tail_exponent(u + 1j * h, B) - tail_exponent(u - 1j * h, B)) / (2.0 * h))


@dataclass(frozen=True)
class TailPoint:
    modulus: float
    arg: float
    slope: float
    meets_threshold: bool

    @property
    def decreasing(self) -> bool:
        return self.slope < 0.0


@dataclass
class TailReport:
    B: float
    points: list[TailPoint] = field(default_factory=list)

    @property
    def all_decreasing(self) -> bool:
        return all(p.decreasing for p in self.points)

    @property
    def offending(self) -> list[TailPoint]:
        return [p for p in self.points if not p.decreasing]


def check_tail_monotonicity(B: float, modulus_grid, arg_grid, strict: bool = True) -> TailReport:
    """Check numerically that ``Re(sqrt(u) log u + B sqrt(u))`` grows with Im(u) > 0.

    Equivalently the integrand modulus ``exp(-Re(...))`` decays along the
    contour.  The reported ``slope`` is the derivative of the negated real part,
    so every entry should be negative.  With ``strict`` the grid must satisfy
    ``log|u| + B + 2 >= 12``, the size condition under which the decay is
    guaranteed.
    """
    moduli = [float(m) for m in modulus_grid]
    args = [float(a) for a in arg_grid]
    if not moduli or not args:
        raise DomainError("tail check needs non-empty grids")
    if any(not 0.0 < a <= math.pi / 2 for a in args):
        raise DomainError("arguments must lie in (0, pi/2]")
    low = [m for m in moduli if not m > 0 or math.log(m) + B + 2.0 < TAIL_THRESHOLD]
    if strict and low:
        raise DomainError(f"moduli below the threshold log|u| + B + 2 >= 12: {low}")
    report = TailReport(B)
    for m in moduli:
        for a in args:
            u = m * complex(math.cos(a), math.sin(a))
            report.points.append(
                TailPoint(m, a, tail_slope(u, B), math.log(m) + B + 2.0 >= TAIL_THRESHOLD)
            )
    return report
