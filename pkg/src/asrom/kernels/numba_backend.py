"""Numba-compiled element kernels; same surface as numpy_backend."""

import numpy as np
from numba import njit

from .reference import N_QUAD, P1_VAL, P2_GRAD, P2_VAL, QUAD_WEIGHTS

_W = QUAD_WEIGHTS
_P2V = P2_VAL
_P2G = P2_GRAD
_P1V = P1_VAL


@njit(cache=True)
def _phys_grad_cell(inv_jt_c, gq):
    # gq: (6, 2) reference gradients at one quadrature point
    out = np.empty((6, 2))
    for i in range(6):
        out[i, 0] = inv_jt_c[0, 0] * gq[i, 0] + inv_jt_c[0, 1] * gq[i, 1]
        out[i, 1] = inv_jt_c[1, 0] * gq[i, 0] + inv_jt_c[1, 1] * gq[i, 1]
    return out


@njit(cache=True)
def stiffness_mass_local(det, inv_jt):
    nc = det.shape[0]
    ke = np.zeros((nc, 6, 6))
    me = np.zeros((nc, 6, 6))
    for c in range(nc):
        ad = abs(det[c])
        for q in range(N_QUAD):
            g = _phys_grad_cell(inv_jt[c], _P2G[q])
            wq = _W[q] * ad
            for i in range(6):
                for j in range(6):
                    ke[c, i, j] += wq * (g[i, 0] * g[j, 0] + g[i, 1] * g[j, 1])
                    me[c, i, j] += wq * _P2V[q, i] * _P2V[q, j]
    return ke, me


@njit(cache=True)
def divergence_local(det, inv_jt):
    nc = det.shape[0]
    gx = np.zeros((nc, 3, 6))
    gy = np.zeros((nc, 3, 6))
    for c in range(nc):
        ad = abs(det[c])
        for q in range(N_QUAD):
            g = _phys_grad_cell(inv_jt[c], _P2G[q])
            wq = _W[q] * ad
            for k in range(3):
                for j in range(6):
                    gx[c, k, j] += wq * _P1V[q, k] * g[j, 0]
                    gy[c, k, j] += wq * _P1V[q, k] * g[j, 1]
    return gx, gy


@njit(cache=True)
def pressure_mass_local(det):
    nc = det.shape[0]
    me = np.zeros((nc, 3, 3))
    for c in range(nc):
        ad = abs(det[c])
        for q in range(N_QUAD):
            wq = _W[q] * ad
            for i in range(3):
                for j in range(3):
                    me[c, i, j] += wq * _P1V[q, i] * _P1V[q, j]
    return me


@njit(cache=True)
def convection_local(det, inv_jt, w1e, w2e):
    nc = det.shape[0]
    ce = np.zeros((nc, 6, 6))
    for c in range(nc):
        ad = abs(det[c])
        for q in range(N_QUAD):
            g = _phys_grad_cell(inv_jt[c], _P2G[q])
            w1q = 0.0
            w2q = 0.0
            for j in range(6):
                w1q += w1e[c, j] * _P2V[q, j]
                w2q += w2e[c, j] * _P2V[q, j]
            wq = _W[q] * ad
            for j in range(6):
                adv = w1q * g[j, 0] + w2q * g[j, 1]
                for i in range(6):
                    ce[c, i, j] += wq * _P2V[q, i] * adv
    return ce


@njit(cache=True)
def gradient_coupling_local(det, inv_jt, w1e, w2e):
    nc = det.shape[0]
    d11 = np.zeros((nc, 6, 6))
    d12 = np.zeros((nc, 6, 6))
    d21 = np.zeros((nc, 6, 6))
    d22 = np.zeros((nc, 6, 6))
    for c in range(nc):
        ad = abs(det[c])
        for q in range(N_QUAD):
            g = _phys_grad_cell(inv_jt[c], _P2G[q])
            dw11 = 0.0
            dw12 = 0.0
            dw21 = 0.0
            dw22 = 0.0
            for j in range(6):
                dw11 += w1e[c, j] * g[j, 0]
                dw12 += w1e[c, j] * g[j, 1]
                dw21 += w2e[c, j] * g[j, 0]
                dw22 += w2e[c, j] * g[j, 1]
            wq = _W[q] * ad
            for i in range(6):
                for j in range(6):
                    m = wq * _P2V[q, i] * _P2V[q, j]
                    d11[c, i, j] += m * dw11
                    d12[c, i, j] += m * dw12
                    d21[c, i, j] += m * dw21
                    d22[c, i, j] += m * dw22
    return d11, d12, d21, d22


@njit(cache=True)
def rbf_displace(points, centers, weights, radius):
    n = points.shape[0]
    m = centers.shape[0]
    out = np.zeros((n, 2))
    for i in range(n):
        for j in range(m):
            dx = points[i, 0] - centers[j, 0]
            dy = points[i, 1] - centers[j, 1]
            r = np.sqrt(dx * dx + dy * dy) / radius
            if r > 0.0:
                phi = r * r * np.log(r)
                out[i, 0] += phi * weights[j, 0]
                out[i, 1] += phi * weights[j, 1]
    return out
