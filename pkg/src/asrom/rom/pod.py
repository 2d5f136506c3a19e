"""Orthonormal compression of snapshot families in problem inner products.

Works on the snapshot Gram matrix (method of snapshots): eigenpairs of
S^T X S give the squared singular values and the mode combinations without
ever forming a matrix square root.  A Cholesky correction restores
orthonormality to rounding error while preserving every leading span, so
mode sets stay nested under truncation.
"""

import numpy as np

from ..errors import ConfigError, SingularSystemError


def pod(S, X, n_modes=None, tolerance=None, rank_cutoff=1e-12):
    """Compress snapshot columns to an X-orthonormal basis.

    Exactly one of n_modes / tolerance selects the count: either the first
    n_modes modes (capped at the numerical rank) or the smallest count
    whose retained energy fraction is at least 1 - tolerance^2.

    Returns (modes, singular_values) with singular values for all snapshot
    directions in non-increasing order.
    """
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[1] == 0:
        raise ConfigError("snapshot matrix must have at least one column")
    k = S.shape[1]
    gram = S.T @ (X @ S)
    gram = 0.5 * (gram + gram.T)
    lam, V = np.linalg.eigh(gram)
    order = np.argsort(lam)[::-1]
    lam = np.clip(lam[order], 0.0, None)
    V = V[:, order]
    # Gram eigenvalues below the rounding floor of the method are noise,
    # not data; report them as exact zeros
    lam[lam < 1e-13 * lam[0]] = 0.0
    sigma = np.sqrt(lam)
    if sigma[0] == 0.0:
        raise ConfigError("zero snapshot matrix")

    rank = int(np.sum(sigma > rank_cutoff * sigma[0]))
    if n_modes is not None:
        if n_modes > k:
            raise ConfigError(f"requested {n_modes} modes from {k} snapshots")
        n = min(int(n_modes), rank)
    elif tolerance is not None:
        energy = np.cumsum(lam) / np.sum(lam)
        n = int(np.searchsorted(energy, 1.0 - tolerance**2) + 1)
        n = min(n, rank)
    else:
        n = rank

    modes = S @ (V[:, :n] / sigma[:n])
    modes = reorthonormalize(modes, X)
    return modes, sigma


def reorthonormalize(Z, X):
    """Cholesky correction Z -> Z L^{-T}; leading spans are unchanged."""
    C = Z.T @ (X @ Z)
    C = 0.5 * (C + C.T)
    try:
        L = np.linalg.cholesky(C)
    except np.linalg.LinAlgError:
        raise SingularSystemError(
            "basis columns are numerically dependent; retain fewer modes"
        )
    return np.linalg.solve(L, Z.T).T


def projection_error_sq(S, modes, X):
    """Total squared X-norm error of projecting the snapshots onto the modes."""
    XS = X @ S
    coeffs = modes.T @ XS
    total = float(np.sum(S * XS))
    return total - float(np.sum(coeffs * coeffs))
