import numpy as np
import pytest
import scipy.sparse as sp

from asrom.errors import ConfigError
from asrom.rom import pod, projection_error_sq, reorthonormalize


def _spd(rng, n):
    A = rng.standard_normal((n, n))
    M = A @ A.T + n * np.eye(n)
    return sp.csr_matrix(M)


def _xnorm_sq(v, X):
    return float(v @ (X @ v))


def test_orthonormal_columns_preserved(rng):
    n = 30
    X = _spd(rng, n)
    S = reorthonormalize(rng.standard_normal((n, 2)), X)
    modes, sigma = pod(S, X, n_modes=2)
    assert sigma[0] == pytest.approx(1.0, abs=1e-10)
    assert sigma[1] == pytest.approx(1.0, abs=1e-10)
    # same span: X-orthogonal projector agrees on the original columns
    proj = modes @ (modes.T @ (X @ S))
    assert np.abs(proj - S).max() <= 1e-10


def test_rank_one_repeated_column(rng):
    n, k = 25, 6
    X = _spd(rng, n)
    c = rng.standard_normal(n)
    S = np.tile(c[:, None], (1, k))
    modes, sigma = pod(S, X, n_modes=1)
    assert sigma[0] == pytest.approx(
        np.sqrt(k) * np.sqrt(_xnorm_sq(c, X)), rel=1e-12
    )
    assert np.all(sigma[1:] <= 1e-10 * sigma[0])
    assert modes.shape == (n, 1)


def test_tail_identity_and_orthonormality(rng):
    n, k = 50, 20
    X = _spd(rng, n)
    S = rng.standard_normal((n, k))
    modes_all, sigma = pod(S, X, n_modes=k)
    total = float(np.sum(sigma**2))
    for N in range(1, modes_all.shape[1] + 1):
        Z = modes_all[:, :N]
        gram = Z.T @ (X @ Z)
        assert np.abs(gram - np.eye(N)).max() <= 1e-8
        err = projection_error_sq(S, Z, X)
        tail = float(np.sum(sigma[N:] ** 2))
        assert abs(err - tail) <= 1e-8 * total


def test_monotone_projection_error(rng):
    n, k = 40, 12
    X = _spd(rng, n)
    S = rng.standard_normal((n, k))
    modes, _ = pod(S, X, n_modes=k)
    errs = [projection_error_sq(S, modes[:, :N], X) for N in range(1, k + 1)]
    for a, b in zip(errs, errs[1:]):
        assert b <= a + 1e-9 * abs(errs[0])


def test_tolerance_selection(rng):
    n = 30
    X = sp.identity(n, format="csr")
    # two dominant directions, then noise at 1e-6
    q, _ = np.linalg.qr(rng.standard_normal((n, 8)))
    weights = np.array([1.0, 0.5, 1e-6, 1e-6, 1e-7, 1e-7, 1e-8, 1e-8])
    S = q @ np.diag(weights) @ np.linalg.qr(rng.standard_normal((8, 8)))[0]
    modes, sigma = pod(S, X, tolerance=1e-3)
    assert modes.shape[1] == 2


def test_zero_matrix_rejected():
    X = sp.identity(5, format="csr")
    with pytest.raises(ConfigError):
        pod(np.zeros((5, 3)), X, n_modes=1)


def test_more_modes_than_snapshots_rejected(rng):
    X = sp.identity(6, format="csr")
    with pytest.raises(ConfigError):
        pod(rng.standard_normal((6, 3)), X, n_modes=4)


def test_singular_values_descending(rng):
    X = _spd(rng, 20)
    _, sigma = pod(rng.standard_normal((20, 9)), X, n_modes=3)
    assert np.all(np.diff(sigma) <= 1e-12)


def test_reorthonormalize_preserves_leading_spans(rng):
    n = 30
    X = _spd(rng, n)
    Z = rng.standard_normal((n, 5))
    Q = reorthonormalize(Z, X)
    for N in (1, 3, 5):
        # leading N columns of Q span the same space as leading N of Z
        coeff, *_ = np.linalg.lstsq(Q[:, :N], Z[:, :N], rcond=None)
        assert np.abs(Q[:, :N] @ coeff - Z[:, :N]).max() <= 1e-8
