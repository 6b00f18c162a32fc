"""Best-effort numerical search for eps-equipartitions of point clouds.

Multi-start Nelder-Mead on the k(d+1) hyperplane parameters.  The empirical
objective (sum of squared test-map components) is piecewise constant, so no
gradients are used.  The simplex ranks points by a logistic-smoothed version
of the objective whose bandwidth anneals together with the simplex size, from
the data scale down to eps resolution; success is always judged on the exact
residual.  NotFound never means that no equipartition
exists, only that none was found within the budget.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .model import (
    AffineHyperplane,
    Arrangement,
    DimensionError,
    PointCloud,
    eval_test_map,
)

FOUND = "Found"
NOT_FOUND = "NotFound"


@dataclass(frozen=True)
class SolverConfig:
    eps: float = 0.02
    restarts: int = 16
    max_iters: int = 4000
    seed: int = 0
    reflect: float = 1.0
    expand: float = 2.0
    contract: float = 0.5
    shrink: float = 0.5
    initial_step: float = 0.5
    time_budget: Optional[float] = None
    workers: int = 1

    def validate(self, k: int):
        if not 0 < self.eps < 2.0**-k:
            raise ValueError(f"eps must lie in (0, 2^-k) = (0, {2.0**-k})")
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be >= 1")
        if self.seed < 0 or self.seed >= 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not (self.reflect > 0 and self.expand > 1 and 0 < self.contract < 1 and 0 < self.shrink < 1):
            raise ValueError("invalid simplex coefficients")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class SolveResult:
    status: str
    arrangement: Optional[Arrangement]
    residual: float
    evaluations: int
    restart_index: Optional[int]

    @property
    def found(self) -> bool:
        return self.status == FOUND

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "residual": self.residual,
            "arrangement": None if self.arrangement is None else self.arrangement.to_json(),
            "evaluations": self.evaluations,
            "restart_index": self.restart_index,
        }


def _check_clouds(masses: Sequence, d: Optional[int] = None) -> int:
    if not masses:
        raise ValueError("at least one mass required")
    for m in masses:
        if not isinstance(m, PointCloud):
            raise TypeError("the solver works on point clouds only")
    dims = {m.dim for m in masses}
    if len(dims) != 1:
        raise DimensionError("masses of different dimensions")
    dim = dims.pop()
    if d is not None and dim != d:
        raise DimensionError(f"mass dimension {dim} != {d}")
    return dim


def objective(masses: Sequence, arr: Arrangement) -> float:
    """Sum of squared test-map components; zero iff exact equipartition."""
    tv = eval_test_map(masses, arr)
    return float(sum(float(x) ** 2 for x in tv.values.ravel()))


class _FastObjective:
    """Vectorized test-map evaluation on float clouds in normalized coordinates."""

    def __init__(self, masses: Sequence[PointCloud], k: int):
        self.k = k
        self.d = masses[0].dim
        allpts = np.vstack([m.points for m in masses])
        allw = np.concatenate([m.weights / len(masses) for m in masses])
        self.center = allw @ allpts
        spread = np.sqrt(allw @ np.sum((allpts - self.center) ** 2, axis=1))
        self.scale = float(spread) if spread > 0 else 1.0
        self.clouds = [((m.points - self.center) / self.scale, m.weights) for m in masses]
        self.powers = 2 ** np.arange(k - 1, -1, -1)
        self.target = 2.0**-k
        self.evaluations = 0
        self.bandwidth = 1.0
        self.best_residual = float("inf")
        self.best_x: Optional[np.ndarray] = None

    def deviations(self, x: np.ndarray) -> np.ndarray:
        p = x.reshape(self.k, self.d + 1)
        v, a = p[:, : self.d], p[:, self.d]
        rows = []
        for pts, w in self.clouds:
            proj = pts @ v.T
            if np.any(proj == a):
                rows.append(self._boundary_row(proj, a, w))
                continue
            code = (proj < a).astype(np.int64) @ self.powers
            rows.append(np.bincount(code, weights=w, minlength=2**self.k) - self.target)
        return np.array(rows)

    def _boundary_row(self, proj, a, w):
        ge, le = proj >= a, proj <= a
        out = np.empty(2**self.k)
        for idx in range(2**self.k):
            mask = np.ones(len(w), dtype=bool)
            for i in range(self.k):
                bit = (idx >> (self.k - 1 - i)) & 1
                mask &= le[:, i] if bit else ge[:, i]
            out[idx] = w[mask].sum() - self.target
        return out

    def smoothed(self, x: np.ndarray, h: float) -> float:
        p = x.reshape(self.k, self.d + 1)
        v, a = p[:, : self.d], p[:, self.d]
        total = 0.0
        for pts, w in self.clouds:
            z = np.clip((pts @ v.T - a) / h, -50.0, 50.0)
            s0 = 1.0 / (1.0 + np.exp(-z))
            for idx in range(2**self.k):
                prob = np.ones(len(w))
                for i in range(self.k):
                    bit = (idx >> (self.k - 1 - i)) & 1
                    prob *= (1.0 - s0[:, i]) if bit else s0[:, i]
                dev = w @ prob - self.target
                total += dev * dev
        return float(total)

    def __call__(self, x: np.ndarray) -> float:
        """Smoothed objective at the current bandwidth; records exact successes."""
        self.evaluations += 1
        res = float(np.max(np.abs(self.deviations(x))))
        if res < self.best_residual:
            self.best_residual, self.best_x = res, x
        return self.smoothed(x, self.bandwidth)

    def to_arrangement(self, x: np.ndarray) -> Arrangement:
        p = x.reshape(self.k, self.d + 1)
        hs = []
        for row in p:
            v = row[: self.d]
            a = self.scale * row[self.d] + float(self.center @ v)
            hs.append(AffineHyperplane(tuple(float(t) for t in v), float(a)).normalized())
        return Arrangement(tuple(hs))


def _normalize(x: np.ndarray, k: int, d: int) -> np.ndarray:
    p = x.reshape(k, d + 1).copy()
    n = np.linalg.norm(p[:, :d], axis=1)
    n[n == 0] = 1.0
    return (p / n[:, None]).ravel()


def _nelder_mead(f: _FastObjective, x0, step, max_iters, cfg: SolverConfig, k, d):
    """One annealing stage; stops early once an exact eps-solution was seen."""
    n = x0.size
    simplex = [x0]
    for i in range(n):
        y = x0.copy()
        y[i] += step
        simplex.append(_normalize(y, k, d))
    vals = [f(x) for x in simplex]
    it = 0
    while it < max_iters and f.best_residual > cfg.eps:
        it += 1
        order = sorted(range(n + 1), key=lambda i: vals[i])
        simplex = [simplex[i] for i in order]
        vals = [vals[i] for i in order]
        spread = max(np.max(np.abs(s - simplex[0])) for s in simplex[1:])
        if spread < step * 1e-3:
            break
        centroid = np.mean(simplex[:-1], axis=0)
        xr = _normalize(centroid + cfg.reflect * (centroid - simplex[-1]), k, d)
        fr = f(xr)
        if fr < vals[0]:
            xe = _normalize(centroid + cfg.expand * (xr - centroid), k, d)
            fe = f(xe)
            simplex[-1], vals[-1] = (xe, fe) if fe < fr else (xr, fr)
        elif fr < vals[-2]:
            simplex[-1], vals[-1] = xr, fr
        else:
            if fr < vals[-1]:
                xc = _normalize(centroid + cfg.contract * (xr - centroid), k, d)
            else:
                xc = _normalize(centroid + cfg.contract * (simplex[-1] - centroid), k, d)
            fc = f(xc)
            if fc < min(fr, vals[-1]):
                simplex[-1], vals[-1] = xc, fc
            else:
                for i in range(1, n + 1):
                    simplex[i] = _normalize(simplex[0] + cfg.shrink * (simplex[i] - simplex[0]), k, d)
                    vals[i] = f(simplex[i])
    return simplex[min(range(n + 1), key=lambda i: vals[i])]


def _run_restart(masses, k: int, cfg: SolverConfig, r: int):
    f = _FastObjective(masses, k)
    d = f.d
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, r]))
    # hyperplanes through the weighted centroid (the origin after normalization)
    normals = rng.standard_normal((k, d))
    x = _normalize(np.hstack([normals, np.zeros((k, 1))]).ravel(), k, d)
    step = cfg.initial_step
    floor = cfg.eps / 4
    n_stages = max(1, int(np.ceil(np.log2(cfg.initial_step / floor))) + 1)
    per_stage = max(1, cfg.max_iters // n_stages)
    while f.best_residual > cfg.eps and step >= floor:
        f.bandwidth = step
        x = _nelder_mead(f, x, step, per_stage, cfg, k, d)
        step /= 2
    return f.to_arrangement(f.best_x), f.best_residual, f.evaluations


def solve(masses: Sequence[PointCloud], k: int, config: SolverConfig = SolverConfig()) -> SolveResult:
    """Search for k hyperplanes with every test-map component within eps.

    Deterministic in (masses, k, config): restart r draws from the stream
    seeded by (seed, r), and the reported restart is the lowest index that
    succeeds, whatever the number of workers.
    """
    d = _check_clouds(masses)
    if k < 1 or k > d:
        raise DimensionError(f"need 1 <= k <= d (k={k}, d={d})")
    config.validate(k)
    clouds = [m.to_float() for m in masses]
    start = time.monotonic()
    best: Optional[tuple[float, Arrangement]] = None
    evaluations = 0
    batch = config.workers
    pool = ThreadPoolExecutor(batch) if batch > 1 else None
    try:
        for first in range(0, config.restarts, batch):
            if config.time_budget is not None and time.monotonic() - start > config.time_budget:
                break
            idx = list(range(first, min(first + batch, config.restarts)))
            if pool is None:
                results = [_run_restart(clouds, k, config, r) for r in idx]
            else:
                results = list(pool.map(lambda r: _run_restart(clouds, k, config, r), idx))
            for r, (arr, res, evals) in zip(idx, results):
                evaluations += evals
                if best is None or res < best[0]:
                    best = (res, arr)
                if res <= config.eps:
                    # confirm with the reference evaluation in original coordinates
                    check = eval_test_map(clouds, arr).max_abs()
                    if check <= config.eps:
                        return SolveResult(FOUND, arr, check, evaluations, r)
    finally:
        if pool is not None:
            pool.shutdown()
    if best is None:
        return SolveResult(NOT_FOUND, None, float("inf"), evaluations, None)
    return SolveResult(NOT_FOUND, best[1], best[0], evaluations, None)


def ham_sandwich(masses: Sequence[PointCloud], config: SolverConfig = SolverConfig()) -> SolveResult:
    """One hyperplane bisecting each of j clouds in R^j."""
    j = len(masses)
    _check_clouds(masses, d=j)
    return solve(masses, 1, config)


def gaussian_clouds(
    j: int, d: int, n: int, rng: np.random.Generator, separation: float = 4.0
) -> list[PointCloud]:
    """j unit Gaussian clouds of n equal-weight points, centers at distance ``separation`` from 0."""
    centers = rng.standard_normal((j, d))
    centers *= separation / np.linalg.norm(centers, axis=1, keepdims=True)
    return [PointCloud(c + rng.standard_normal((n, d))) for c in centers]
