"""Galerkin projection of the saddle-point system and the reduced solve.

The advection block has no affine decomposition here: each reduced Newton
step reconstructs the velocity, reassembles advection on the full mesh and
projects it.  That keeps the reduction exact at the price of online cost,
which is acceptable at this problem scale.

Projected quadratic systems can carry spurious roots that the full-order
Newton never sees, and a reduced creeping-flow initial guess can land in
their basins (the reduced space only represents target-regime states, so
nothing anchors the early iterates).  rom_solve therefore accepts an
explicit initial guess; error studies warm-start at the projection of the
state they compare against, which pins the reduced Newton to the same
solution branch.  Without a guess it falls back to the reduced
creeping-flow solve.
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, NonConvergence
from ..fem.operators import assemble_convection, assemble_gradient_coupling


@dataclass
class ReducedOperators:
    """Dense projected blocks plus the full-order handle for advection."""

    A_N: np.ndarray
    B_N: np.ndarray
    f_N: np.ndarray
    g_N: np.ndarray
    ops: object
    basis: object
    mu: np.ndarray | None = None


@dataclass
class ROMSolution:
    u_N: np.ndarray
    p_N: np.ndarray
    u: np.ndarray
    p: np.ndarray
    iterations: int
    residual_norm: float
    qoi: float | None = None
    history: list = field(default_factory=list)


def project_operators(ops, basis, mu=None):
    """Project the parameter's assembled blocks onto the reduced spaces."""
    Z = basis.Z_us
    Zp = basis.Z_p
    if Z.shape[0] != ops.n_velocity or Zp.shape[0] != ops.n_pressure:
        raise ConfigError("basis and operators have mismatched dimensions")
    A_N = Z.T @ (ops.A @ Z)
    B_N = Zp.T @ (ops.B @ Z)
    f_N = Z.T @ ops.f
    g_N = Zp.T @ ops.g
    return ReducedOperators(A_N=A_N, B_N=B_N, f_N=f_N, g_N=g_N, ops=ops, basis=basis, mu=mu)


def project_convection(reduced, w_N, include_lifting=False):
    """Projected advection block at a reduced velocity.

    The plain form is linear in w_N; the solver path sets include_lifting
    to convect with the reconstructed physical field instead.
    """
    Z = reduced.basis.Z_us
    field = Z @ w_N
    if include_lifting:
        field = field + reduced.basis.lifting
    C = assemble_convection(reduced.ops, field)
    return Z.T @ (C @ Z)


def reduced_inf_sup(reduced):
    """Smallest singular value of the projected divergence coupling.

    The bases are orthonormal in the problem inner products, so the plain
    singular values of B_N measure the reduced pressure-velocity coupling.
    """
    return float(np.linalg.svd(reduced.B_N, compute_uv=False).min())


def stokes_guess(reduced):
    """Reduced solve with advection dropped."""
    n_us = reduced.A_N.shape[0]
    n_p = reduced.B_N.shape[0]
    lhs = np.block(
        [
            [reduced.A_N, reduced.B_N.T],
            [reduced.B_N, np.zeros((n_p, n_p))],
        ]
    )
    rhs = np.concatenate([reduced.f_N, reduced.g_N])
    sol = np.linalg.solve(lhs, rhs)
    return sol[:n_us], sol[n_us:]


def rom_solve(reduced, tol=1e-10, tol_rel=1e-8, max_iter=25, initial_guess=None):
    """Dense Newton on the projected system; returns a ROMSolution."""
    n_us = reduced.A_N.shape[0]
    n_p = reduced.B_N.shape[0]
    if n_us < 1 or n_p < 1:
        raise ConfigError("reduced dimensions must be at least 1")

    if initial_guess is None:
        w, p_N = stokes_guess(reduced)
    else:
        w, p_N = (np.array(initial_guess[0], dtype=float),
                  np.array(initial_guess[1], dtype=float))

    Z = reduced.basis.Z_us
    history = []
    r0 = None
    for it in range(max_iter + 1):
        u_full = reduced.basis.lifting + Z @ w
        C = assemble_convection(reduced.ops, u_full)
        r_u = (reduced.A_N @ w - reduced.f_N) + Z.T @ (C @ u_full) + reduced.B_N.T @ p_N
        r_p = reduced.B_N @ w - reduced.g_N
        rnorm = float(np.sqrt(r_u @ r_u + r_p @ r_p))
        history.append(rnorm)
        if r0 is None:
            r0 = rnorm if rnorm > 0.0 else 1.0
        if rnorm <= tol or rnorm <= tol_rel * r0:
            return ROMSolution(
                u_N=w,
                p_N=p_N,
                u=u_full,
                p=reduced.basis.Z_p @ p_N,
                iterations=it,
                residual_norm=rnorm,
                history=history,
            )
        if it == max_iter:
            break
        D = assemble_gradient_coupling(reduced.ops, u_full)
        J_uu = reduced.A_N + Z.T @ ((C + D) @ Z)
        J = np.block(
            [[J_uu, reduced.B_N.T], [reduced.B_N, np.zeros((n_p, n_p))]]
        )
        step = np.linalg.solve(J, -np.concatenate([r_u, r_p]))
        w = w + step[:n_us]
        p_N = p_N + step[n_us:]
    raise NonConvergence(
        f"reduced Newton stalled at residual {history[-1]:.3e}", history=history
    )
