"""Dominant directions of the averaged outer product of response gradients.

The spectrum of that matrix splits the parameter space into the directions
along which the response varies most on average (kept) and a complement
that can be frozen.  Eigenvalue spread is assessed with a resampling band.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError


def covariance(grads):
    """Average outer product (uncentered) of the gradient rows."""
    g = grads.gradients if hasattr(grads, "gradients") else np.asarray(grads)
    return (g.T @ g) / g.shape[0]


def eigendecompose(sigma):
    """Descending eigenpairs with a deterministic sign convention.

    The input is symmetrized first; each eigenvector is flipped so its
    largest-magnitude entry is positive.
    """
    sigma = np.asarray(sigma, dtype=float)
    sym = 0.5 * (sigma + sigma.T)
    lam, vec = np.linalg.eigh(sym)
    order = np.argsort(lam)[::-1]
    lam = lam[order]
    vec = vec[:, order]
    for j in range(vec.shape[1]):
        i = int(np.argmax(np.abs(vec[:, j])))
        if vec[i, j] < 0.0:
            vec[:, j] = -vec[:, j]
    return vec, lam


def bootstrap_eigenvalues(grads, n_boot=500, seed=0):
    """Min/max eigenvalue envelope over resampled gradient sets."""
    g = grads.gradients if hasattr(grads, "gradients") else np.asarray(grads)
    if n_boot < 100:
        raise ConfigError("use at least 100 bootstrap replicates")
    n, m = g.shape
    rng = np.random.default_rng(seed)
    lo = np.full(m, np.inf)
    hi = np.full(m, -np.inf)
    for _ in range(n_boot):
        idx = rng.integers(0, n, size=n)
        gb = g[idx]
        lam = np.linalg.eigvalsh((gb.T @ gb) / n)[::-1]
        lo = np.minimum(lo, lam)
        hi = np.maximum(hi, lam)
    point = np.linalg.eigvalsh((g.T @ g) / n)[::-1]
    return np.minimum(lo, point), np.maximum(hi, point)


def choose_dimension(lam):
    """Largest spectral gap: argmax over i of lam_i / lam_{i+1}."""
    lam = np.asarray(lam, dtype=float)
    eps = np.finfo(float).tiny
    ratios = lam[:-1] / np.maximum(lam[1:], eps)
    return int(np.argmax(ratios)) + 1


@dataclass
class ActiveSubspace:
    """Eigenpairs of the gradient covariance with the active/inactive split."""

    sigma: np.ndarray
    W: np.ndarray
    eigenvalues: np.ndarray
    M: int
    bootstrap_lo: np.ndarray | None = None
    bootstrap_hi: np.ndarray | None = None

    @property
    def W1(self):
        return self.W[:, : self.M]

    @property
    def W2(self):
        return self.W[:, self.M :]

    @classmethod
    def from_gradients(cls, grads, M=None, n_boot=500, seed=0):
        sigma = covariance(grads)
        W, lam = eigendecompose(sigma)
        lo, hi = bootstrap_eigenvalues(grads, n_boot=n_boot, seed=seed)
        m = lam.size
        chosen = choose_dimension(lam) if M is None else int(M)
        if not (1 <= chosen < m):
            raise ConfigError(f"active dimension {chosen} out of range [1, {m - 1}]")
        return cls(
            sigma=sigma,
            W=W,
            eigenvalues=lam,
            M=chosen,
            bootstrap_lo=lo,
            bootstrap_hi=hi,
        )


def partition(W, M):
    """First M eigenvector columns and the rest."""
    m = W.shape[1]
    if not (1 <= M < m):
        raise ConfigError(f"M={M} out of range [1, {m - 1}]")
    return W[:, :M], W[:, M:]


def project_active(W1, mu):
    """Active coordinates of one parameter vector or a batch of rows."""
    mu = np.asarray(mu, dtype=float)
    return mu @ W1


def lift(W1, mu_active, box_low, box_high):
    """Full parameter with the inactive part frozen at the box center.

    Reconstructs around the center and clamps componentwise into the box;
    returns (mu, n_clamped_components).
    """
    box_low = np.asarray(box_low, dtype=float)
    box_high = np.asarray(box_high, dtype=float)
    center = 0.5 * (box_low + box_high)
    mu_active = np.asarray(mu_active, dtype=float)
    mu = center + W1 @ (mu_active - W1.T @ center)
    clamped = np.clip(mu, box_low, box_high)
    n_clamped = int(np.sum(clamped != mu))
    return clamped, n_clamped
