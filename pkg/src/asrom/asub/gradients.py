"""Gradient estimation by local linear least squares over nearest neighbors."""

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from ..errors import ConfigError


@dataclass
class GradientSet:
    gradients: np.ndarray  # (n, m), aligned with the sample rows
    k: int


def local_linear_gradients(samples, k=17):
    """Per-sample gradient from the best linear fit over k nearest neighbors.

    A rank-deficient neighborhood design enlarges k by 5 (up to the sample
    count) for that sample before giving up.
    """
    mu = samples.parameters
    f = samples.values
    n, m = mu.shape
    if k < m + 1:
        raise ConfigError(f"k must be at least {m + 1} for an m={m} linear fit")
    if k > n:
        raise ConfigError("k exceeds the number of samples")

    tree = cKDTree(mu)
    grads = np.zeros((n, m))
    for i in range(n):
        ki = k
        while True:
            _, idx = tree.query(mu[i], k=ki)
            design = np.hstack([np.ones((ki, 1)), mu[idx]])
            coef, _, rank, _ = np.linalg.lstsq(design, f[idx], rcond=None)
            if rank == m + 1:
                grads[i] = coef[1:]
                break
            if ki >= n:
                raise ConfigError(
                    f"neighborhood of sample {i} is degenerate even with k={ki}"
                )
            ki = min(n, ki + 5)
    if not np.all(np.isfinite(grads)):
        raise ConfigError("non-finite gradient estimates")
    return GradientSet(gradients=grads, k=k)
