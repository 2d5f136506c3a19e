"""Polynomial response surfaces on the active coordinates."""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError
from .subspace import project_active


def _monomial_powers(dim, order):
    powers = []
    for total in range(order + 1):
        for combo in itertools.combinations_with_replacement(range(dim), total):
            p = [0] * dim
            for c in combo:
                p[c] += 1
            powers.append(tuple(p))
    return powers


def _design(t, powers):
    cols = [np.prod(t**np.array(p), axis=1) for p in powers]
    return np.stack(cols, axis=1)


@dataclass
class ResponseSurface:
    W1: np.ndarray
    order: int
    powers: list
    coefficients: np.ndarray
    training_error: float

    @property
    def active_dim(self):
        return self.W1.shape[1]


def fit_response_surface(samples, W1, order):
    """Least-squares full polynomial of the given order in the active variables."""
    if order < 0:
        raise ConfigError("polynomial order must be nonnegative")
    t = project_active(W1, samples.parameters)
    powers = _monomial_powers(W1.shape[1], order)
    n_coef = len(powers)
    assert n_coef == math.comb(W1.shape[1] + order, order)
    if samples.n_samples < n_coef:
        raise ConfigError(
            f"underdetermined fit: {samples.n_samples} samples for {n_coef} coefficients"
        )
    X = _design(t, powers)
    coef, _, rank, _ = np.linalg.lstsq(X, samples.values, rcond=None)
    if rank < n_coef:
        raise ConfigError("rank-deficient response surface design matrix")
    resid = X @ coef - samples.values
    denom = np.linalg.norm(samples.values)
    rel = float(np.linalg.norm(resid) / denom) if denom > 0 else float(
        np.linalg.norm(resid)
    )
    return ResponseSurface(
        W1=W1, order=order, powers=powers, coefficients=coef, training_error=rel
    )


def eval_surface(rs, mu):
    """Evaluate at full parameters (rows) or a single vector."""
    mu = np.atleast_2d(np.asarray(mu, dtype=float))
    t = project_active(rs.W1, mu)
    vals = _design(t, rs.powers) @ rs.coefficients
    return vals if vals.size > 1 else float(vals[0])


def surrogate_error_grid(train, test, W, max_dim, max_order):
    """Relative test error for every (active dimension, order) combination.

    Returns a (max_dim, max_order) array; entry (i, j) uses the first i+1
    eigenvector columns and polynomial order j+1.
    """
    if train is test:
        raise ConfigError("train and test sets must be distinct")
    grid = np.zeros((max_dim, max_order))
    denom = np.linalg.norm(test.values)
    if denom == 0.0:
        denom = 1.0
    for i in range(max_dim):
        W1 = W[:, : i + 1]
        for j in range(max_order):
            rs = fit_response_surface(train, W1, j + 1)
            pred = eval_surface(rs, test.parameters)
            grid[i, j] = float(np.linalg.norm(pred - test.values) / denom)
    return grid


def sufficient_summary(samples, W1):
    """Scatter table (active coordinates, response) for 1D/2D inspection."""
    M = W1.shape[1]
    if M not in (1, 2):
        raise ConfigError("summary tables are defined for 1 or 2 active variables")
    t = project_active(W1, samples.parameters)
    return np.hstack([t, samples.values[:, None]])
