"""Pure-numpy element kernels, vectorized over cells."""

import numpy as np

from .reference import N_QUAD, P1_VAL, P2_GRAD, P2_VAL, QUAD_WEIGHTS


def _physical_gradients(inv_jt):
    # (nc, q, 6, 2): grad_phys[c, q, i, :] = inv_jt[c] @ P2_GRAD[q, i]
    return np.einsum("cab,qib->cqia", inv_jt, P2_GRAD)


def stiffness_mass_local(det, inv_jt):
    """Per-cell scalar quadratic stiffness and mass matrices (nc, 6, 6)."""
    absdet = np.abs(det)
    g = _physical_gradients(inv_jt)
    ke = np.einsum("q,cqia,cqja,c->cij", QUAD_WEIGHTS, g, g, absdet)
    me_ref = np.einsum("q,qi,qj->ij", QUAD_WEIGHTS, P2_VAL, P2_VAL)
    me = absdet[:, None, None] * me_ref
    return ke, me


def divergence_local(det, inv_jt):
    """Per-cell coupling integrals of linear test against quadratic x/y derivatives.

    Returns (gx, gy), each (nc, 3, 6) with entries int psi_k * d(phi_j)/dx_a.
    """
    absdet = np.abs(det)
    g = _physical_gradients(inv_jt)
    gx = np.einsum("q,qk,cqj,c->ckj", QUAD_WEIGHTS, P1_VAL, g[..., 0], absdet)
    gy = np.einsum("q,qk,cqj,c->ckj", QUAD_WEIGHTS, P1_VAL, g[..., 1], absdet)
    return gx, gy


def pressure_mass_local(det):
    """Per-cell linear mass matrices (nc, 3, 3)."""
    me_ref = np.einsum("q,qi,qj->ij", QUAD_WEIGHTS, P1_VAL, P1_VAL)
    return np.abs(det)[:, None, None] * me_ref


def convection_local(det, inv_jt, w1e, w2e):
    """Per-cell advection matrices int ((w . grad) phi_j) phi_i, (nc, 6, 6).

    w1e, w2e are the cell-local coefficient arrays (nc, 6) of the two
    components of the convecting quadratic field.
    """
    absdet = np.abs(det)
    g = _physical_gradients(inv_jt)
    w1q = w1e @ P2_VAL.T  # (nc, q)
    w2q = w2e @ P2_VAL.T
    conv = w1q[:, :, None] * g[..., 0] + w2q[:, :, None] * g[..., 1]  # (nc,q,6)
    return np.einsum("q,qi,cqj,c->cij", QUAD_WEIGHTS, P2_VAL, conv, absdet)


def gradient_coupling_local(det, inv_jt, w1e, w2e):
    """Per-cell matrices int phi_i phi_j d(w_a)/d(x_b) for the four blocks.

    Returns (d11, d12, d21, d22), each (nc, 6, 6), where dab weights the
    quadratic mass density by the derivative of component a of the given
    field with respect to coordinate b.
    """
    absdet = np.abs(det)
    g = _physical_gradients(inv_jt)
    out = []
    for we in (w1e, w2e):
        for b in range(2):
            dq = np.einsum("cj,cqj->cq", we, g[..., b])  # (nc, q)
            out.append(
                np.einsum("q,qi,qj,cq,c->cij", QUAD_WEIGHTS, P2_VAL, P2_VAL, dq, absdet)
            )
    return tuple(out)


def rbf_displace(points, centers, weights, radius):
    """Thin-plate-spline displacement sums at each point, (n, 2).

    Adds sum_i weights[i] * phi(|x - centers[i]|; radius) with
    phi(r) = (r/radius)^2 * log(r/radius), zero at r = 0.
    """
    diff = points[:, None, :] - centers[None, :, :]
    r = np.sqrt(np.sum(diff * diff, axis=2)) / radius
    phi = np.zeros_like(r)
    nz = r > 0.0
    phi[nz] = r[nz] ** 2 * np.log(r[nz])
    return phi @ weights
