"""Analytic stand-ins for the PDE response, for fast pipeline exercises.

Each entry maps a parameter vector to a scalar with a known low-dimensional
structure, so the whole gradient/eigenvalue chain can be validated in
milliseconds without a single flow solve.
"""

import numpy as np

from ..errors import ConfigError


def _profile(m, decay=0.9):
    a = decay ** np.arange(m)
    return a / np.linalg.norm(a)


def _alternating(m):
    a = (-1.0) ** np.arange(m) / np.sqrt(np.arange(1, m + 1))
    return a / np.linalg.norm(a)


def ridge_exp(mu):
    mu = np.atleast_2d(mu)
    a = _profile(mu.shape[1])
    return np.exp(mu @ a)


def ridge_quad(mu):
    mu = np.atleast_2d(mu)
    a = _profile(mu.shape[1])
    return (mu @ a) ** 2


def two_ridge_quad(mu):
    mu = np.atleast_2d(mu)
    m = mu.shape[1]
    a1 = _profile(m)
    b = _alternating(m)
    a2 = b - (b @ a1) * a1
    a2 /= np.linalg.norm(a2)
    return (mu @ a1) ** 2 + 0.5 * (mu @ a2) ** 2


REGISTRY = {
    "ridge-exp": ridge_exp,
    "ridge-quad": ridge_quad,
    "two-ridge-quad": two_ridge_quad,
}


def synthetic_qoi(name):
    if name not in REGISTRY:
        raise ConfigError(
            f"unknown synthetic response {name!r}; choices: {sorted(REGISTRY)}"
        )
    return REGISTRY[name]
