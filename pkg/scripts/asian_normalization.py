"""Total mass of the conditional and marginal densities of the GBM time integral."""

import argparse
import math
import sys
import time
from dataclasses import dataclass

import numpy as np

from hwdensity import GbmIntegralQuery, conditional_density, marginal_density
from hwdensity.asian import R_MAX
from hwdensity.quadrature import integrate


@dataclass
class NormalizationConfig:
    t: float = 1.0
    nu: float = 0.0
    x: float = 0.0
    u_max: float = 1e3
    rel_tol: float = 1e-4
    skip_marginal: bool = False


def parse_args() -> NormalizationConfig:
    cfg = NormalizationConfig()
    p = argparse.ArgumentParser(description=__doc__)
    for name, value in vars(cfg).items():
        flag = f"--{name.replace('_', '-')}"
        if isinstance(value, bool):
            p.add_argument(flag, action="store_true")
        else:
            p.add_argument(flag, type=type(value), default=value)
    return NormalizationConfig(**vars(p.parse_args()))


def log_u_mass(log_density, lo: float, hi: float, rel_tol: float) -> float:
    def f(s):
        return np.array([math.exp(log_density(math.exp(si)) + si) for si in s])

    return integrate(f, np.linspace(math.log(lo), math.log(hi), 5), rel_tol=rel_tol).value


def run(cfg: NormalizationConfig) -> int:
    t0 = time.perf_counter()
    lo = max(1e-4, math.exp(cfg.x) / R_MAX)
    mass = log_u_mass(
        lambda u: conditional_density(GbmIntegralQuery(cfg.t, cfg.nu, cfg.x, u)).log_value,
        lo, cfg.u_max, cfg.rel_tol,
    )
    print(f"conditional mass at (t, x) = ({cfg.t:g}, {cfg.x:g}): {mass:.8f}  [{time.perf_counter() - t0:.1f}s]")
    if not cfg.skip_marginal:
        t0 = time.perf_counter()
        mass = log_u_mass(lambda u: marginal_density(cfg.t, cfg.nu, u).log_value, 1e-3, cfg.u_max, cfg.rel_tol)
        print(f"marginal mass at (t, nu) = ({cfg.t:g}, {cfg.nu:g}): {mass:.8f}  [{time.perf_counter() - t0:.1f}s]")
    return 0


if __name__ == "__main__":
    sys.exit(run(parse_args()))
