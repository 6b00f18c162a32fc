"""Seeded solver experiment: two Gaussian clouds in R^3 cut into 4 quarters by 2 planes,
plus the ham-sandwich analogues in R^2 and R^3."""

import argparse
import time

import numpy as np

from equipart.model import is_equipartition
from equipart.solver import SolverConfig, gaussian_clouds, solve

SCENARIOS = {
    # name: (clouds, dimension, points, k, restarts)
    "hadwiger": (2, 3, 1000, 2, 64),
    "ham-sandwich-2": (2, 2, 500, 1, 16),
    "ham-sandwich-3": (3, 3, 500, 1, 16),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=20)
    ap.add_argument("--eps", type=float, default=0.02)
    ap.add_argument("--separation", type=float, default=4.0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--scenario", choices=sorted(SCENARIOS), action="append")
    a = ap.parse_args()

    for name in a.scenario or list(SCENARIOS):
        j, d, n, k, restarts = SCENARIOS[name]
        found, times, residuals = 0, [], []
        for inst in range(a.instances):
            masses = gaussian_clouds(j, d, n, np.random.default_rng(inst), a.separation)
            cfg = SolverConfig(eps=a.eps, restarts=restarts, seed=inst, workers=a.workers, time_budget=120.0)
            t0 = time.perf_counter()
            res = solve(masses, k, cfg)
            times.append(time.perf_counter() - t0)
            residuals.append(res.residual)
            if res.found and is_equipartition(masses, res.arrangement, a.eps):
                found += 1
        print(
            f"{name:>15}: found {found}/{a.instances}  "
            f"median residual {np.median(residuals):.4f}  max time {max(times):.2f}s"
        )


if __name__ == "__main__":
    main()
