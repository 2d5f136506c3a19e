"""Newton solver for the stationary flow system, plus supremizer and
inf-sup utilities.

Boundary data rides in through the lifting vector: the unknown is the
homogeneous part of the velocity, and residual rows are restricted to the
free dofs.  The Newton initial guess is the Stokes solution (advection
dropped); a failed solve retries along a short viscosity continuation
ramp before giving up.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..errors import NonConvergence
from .operators import assemble_convection, assemble_gradient_coupling


@dataclass
class HFSolution:
    """Converged high-fidelity state for one parameter value."""

    u: np.ndarray
    p: np.ndarray
    mu: np.ndarray | None
    iterations: int
    residual_norm: float
    qoi: float | None = None
    history: list = field(default_factory=list)


def residual(ops, u, p):
    """Nonlinear residual (momentum rows on free dofs, all continuity rows)."""
    C = assemble_convection(ops, u)
    r_u = (ops.A @ u + C @ u + ops.B.T @ p)[ops.space.free_velocity]
    r_p = ops.B @ u
    return r_u, r_p


def _embed(ops, z_free):
    u = ops.lifting.copy()
    u[ops.space.free_velocity] += z_free
    return u


def _saddle_solve(ops, Avv, rhs_u, rhs_p):
    free = ops.space.free_velocity
    Bf = ops.B[:, free]
    J = sp.bmat([[Avv[free][:, free], Bf.T], [Bf, None]], format="csc")
    sol = spla.splu(J).solve(np.concatenate([rhs_u, rhs_p]))
    nf = free.size
    return sol[:nf], sol[nf:]


def stokes_solve(ops):
    """Linear solve with advection dropped; also the default initial guess."""
    free = ops.space.free_velocity
    z, p = _saddle_solve(ops, ops.A, ops.f[free], ops.g)
    return _embed(ops, z), p


def newton_solve(
    ops,
    space=None,
    physics=None,
    initial_guess=None,
    tol_abs=1e-10,
    tol_rel=1e-8,
    max_iter=25,
):
    """Solve the full nonlinear system; returns an HFSolution.

    Stops when the residual norm drops below tol_abs or below tol_rel times
    the initial residual, whichever happens first.  Raises NonConvergence
    (with the residual history attached) after max_iter steps.
    """
    if initial_guess is None:
        u, p = stokes_solve(ops)
    else:
        u, p = initial_guess
        u = u.copy()
        p = p.copy()

    free = ops.space.free_velocity
    # the relative criterion is judged against the forcing scale and only
    # accepted once steps stop paying off, so easy problems still run down
    # to the absolute tolerance while heavily scaled ones stop at their
    # rounding floor
    rhs = np.concatenate([ops.f[free], ops.g])
    scale = max(float(np.linalg.norm(rhs)), np.finfo(float).tiny)
    history = []
    for it in range(max_iter + 1):
        r_u, r_p = residual(ops, u, p)
        rnorm = float(np.sqrt(r_u @ r_u + r_p @ r_p))
        history.append(rnorm)
        stagnant = len(history) > 1 and rnorm > 0.5 * history[-2]
        if rnorm <= tol_abs or (rnorm <= tol_rel * scale and stagnant):
            return HFSolution(
                u=u, p=p, mu=None, iterations=it, residual_norm=rnorm, history=history
            )
        if it == max_iter:
            break
        C = assemble_convection(ops, u)
        D = assemble_gradient_coupling(ops, u)
        dz, dp = _saddle_solve(ops, ops.A + C + D, -r_u, -r_p)
        u[free] += dz
        p += dp
    raise NonConvergence(
        f"Newton stalled at residual {history[-1]:.3e} after {max_iter} iterations",
        history=history,
    )


def solve_with_continuation(ops, **newton_kw):
    """Newton with a viscosity ramp fallback (2x, sqrt(2)x, 1x)."""
    try:
        return newton_solve(ops, **newton_kw)
    except NonConvergence:
        guess = None
        for factor in (2.0, np.sqrt(2.0), 1.0):
            scaled = ops.with_viscosity(ops.nu * factor) if factor != 1.0 else ops
            sol = newton_solve(scaled, initial_guess=guess, **newton_kw)
            guess = (sol.u, sol.p)
        return sol


def supremizer(ops, p):
    """Velocity representer of the pressure coupling: Xu s = B^T p on free dofs.

    The result is zero on all constrained dofs and satisfies the identity
    s^T Xu s = p^T B s.
    """
    free = ops.space.free_velocity
    rhs = (ops.B.T @ p)[free]
    s = np.zeros(ops.n_velocity)
    s[free] = ops.xu_free_solve(rhs)
    return s


def inf_sup_constant(ops, tol=1e-9, maxiter=600, restarts=3, seed=0):
    """Discrete inf-sup constant via the smallest eigenvalue of the
    pressure Schur complement (B Xu^-1 B^T versus the pressure mass).

    Solved iteratively with LOBPCG; raises NonConvergence after bounded
    restarts.
    """
    free = ops.space.free_velocity
    Bf = ops.B[:, free].tocsr()
    n = ops.n_pressure

    def schur(q):
        q = np.atleast_2d(q.T).T  # (n, k)
        out = np.empty_like(q)
        for j in range(q.shape[1]):
            out[:, j] = Bf @ ops.xu_free_solve(Bf.T @ q[:, j])
        return out

    S = spla.LinearOperator((n, n), matvec=schur, matmat=schur)
    rng = np.random.default_rng(seed)
    last_exc = None
    for attempt in range(restarts):
        X = rng.standard_normal((n, 4))
        try:
            vals, _ = spla.lobpcg(
                S, X, B=ops.Xp, largest=False, tol=tol, maxiter=maxiter
            )
            lam = float(np.min(vals))
            if lam > 0.0 and np.isfinite(lam):
                return float(np.sqrt(lam))
        except Exception as exc:  # lobpcg can fail on unlucky starts
            last_exc = exc
    raise NonConvergence(
        f"inf-sup eigensolve did not converge after {restarts} restarts: {last_exc}"
    )
