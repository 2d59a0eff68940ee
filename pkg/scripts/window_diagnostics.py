"""How much of the contour integral the central window |y| <= log(1/t)^2 / t^1.5 captures."""

import argparse
import math
import sys
from dataclasses import dataclass, field

from hwdensity import ContourSpec, HwParams, oracle_density, solve_saddle
from hwdensity.inversion import gaussian_window


@dataclass
class WindowConfig:
    r: float = 1.0
    ts: list = field(default_factory=lambda: [0.05, 0.02, 0.01, 0.005, 0.002, 0.001])


def run(cfg: WindowConfig) -> int:
    p = HwParams(cfg.r)
    print(f"{'t':>8} {'h*sqrt(M)':>10} {'window gap':>12} {'erfc(h sqrt M)':>15} {'gauss gap':>12}")
    for t in cfg.ts:
        sol = solve_saddle(t, p)
        h = math.log(1 / t) ** 2 / t**1.5
        z = h * math.sqrt(sol.M_exact)
        full = oracle_density(t, p).log_value
        cut = oracle_density(t, p, ContourSpec(half_width=h)).log_value
        gauss = gaussian_window(sol.M_exact, h) / math.sqrt(math.pi / sol.M_exact) - 1
        print(f"{t:8.3g} {z:10.4f} {math.expm1(cut - full):12.3e} {math.erfc(z):15.3e} {gauss:12.3e}")
    return 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r", type=float, default=1.0)
    ap.add_argument("--t", type=float, nargs="+", default=None)
    a = ap.parse_args()
    cfg = WindowConfig(r=a.r) if a.t is None else WindowConfig(r=a.r, ts=a.t)
    sys.exit(run(cfg))
