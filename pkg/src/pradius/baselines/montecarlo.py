"""Population Monte Carlo with go-with-the-winners resampling.

A population of unit vectors is pushed through randomly chosen matrices.
Each walker's weight picks up ``||A_i u||^p`` per step; periodically the
mean weight is folded into a running log-average and walkers are
resampled in proportion to their weights (systematic resampling), which
keeps the variance of the heavy-tailed products under control.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..linalg import MatrixTuple, PRadiusError


@dataclass(frozen=True)
class MonteCarloConfig:
    sample_length: int
    runs: int
    seed: int = 0
    resample_every: int = 1

    def __post_init__(self):
        if min(self.sample_length, self.runs, self.resample_every) < 1:
            raise ValueError("sample_length, runs and resample_every must be positive")


def systematic_resample(weights: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    m = len(weights)
    cdf = np.cumsum(weights)
    cdf /= cdf[-1]
    positions = (rng.random() + np.arange(m)) / m
    return np.minimum(np.searchsorted(cdf, positions, side="right"), m - 1)


def monte_carlo_estimate(tup: MatrixTuple, p, config: MonteCarloConfig) -> float:
    """Resampled Monte Carlo estimate of ``rho_p``; reproducible from ``config.seed``.

    ``config.runs`` is the population size.  Letters are drawn uniformly (or
    from the tuple's weights), so the log-average growth of the mean weight
    estimates ``log(rho_p / N)``; the uniform factor ``N`` is restored at
    the end.
    """
    p = float(p)
    rng = np.random.Generator(np.random.PCG64(config.seed))
    mats = np.stack([m.to_numpy() for m in tup.matrices])
    count, d = mats.shape[0], mats.shape[1]
    if tup.weights is None:
        probs, scale = None, float(count)
    else:
        probs, scale = np.array([float(w) for w in tup.weights]), 1.0
    m = config.runs
    u = rng.standard_normal((m, d))
    u /= np.linalg.norm(u, axis=1)[:, None]
    weights = np.ones(m)
    log_total = 0.0
    for step in range(1, config.sample_length + 1):
        letters = rng.choice(count, size=m, p=probs)
        v = np.einsum("mij,mj->mi", mats[letters], u)
        norms = np.linalg.norm(v, axis=1)
        if np.any(norms == 0):
            raise PRadiusError("a walker was mapped to the zero vector")
        u = v / norms[:, None]
        with np.errstate(over="ignore", under="ignore"):
            weights = weights * norms ** p
        if step % config.resample_every == 0 or step == config.sample_length:
            mean = float(weights.mean())
            if not math.isfinite(mean) or mean <= 0:
                raise PRadiusError("walker weights under- or overflowed; use resample_every=1")
            log_total += math.log(mean)
            if step < config.sample_length:
                u = u[systematic_resample(weights, rng)]
            weights = np.ones(m)
    return scale * math.exp(log_total / config.sample_length)
