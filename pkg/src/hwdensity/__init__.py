"""Small-time asymptotics and numerical inversion of the Hartman-Watson density."""

from .asian import GbmIntegralQuery, conditional_density, marginal_density
from .asymptotics import (
    LogDensity,
    Method,
    density_main,
    density_rough,
    density_saddle_form,
    exponent_expansion,
    levy_density,
    log_density_crude,
)
from .errors import (
    DomainError,
    HWError,
    NegativeCurvature,
    NonConvergence,
    NoSaddle,
    PoleError,
    ToleranceNotMet,
)
from .inversion import (
    ContourSpec,
    check_tail_monotonicity,
    levy_oracle,
    oracle_density,
    real_line_density,
)
from .saddle import SaddleSolution, curvature_m, from_sp_identity, saddle_rhs, solve_saddle, u0_bootstrap
from .specfun import HwParams, LogComplex, log_bessel_i, log_gamma_complex

__version__ = "0.1.0"
