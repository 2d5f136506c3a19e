"""Sparse operator assembly for the saddle-point flow system.

Block layout: velocity ordered as [x components | y components] over the
scalar dofs, pressure over vertices.  All integrals use the degree-5
triangle rule, exact for every bilinear and trilinear integrand of the
quadratic/linear pair on affine cells.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .. import kernels
from ..errors import ConfigError
from .space import inlet_lifting


@dataclass
class PhysicsConfig:
    """Nondimensional viscosity and inlet peak velocity."""

    viscosity: float
    inlet_peak: float = 1.0
    reference_width: float = 1.0

    def __post_init__(self):
        if self.viscosity <= 0.0 or self.inlet_peak <= 0.0:
            raise ConfigError("viscosity and inlet peak velocity must be positive")

    @property
    def reynolds(self):
        return self.inlet_peak * self.reference_width / self.viscosity


def _scatter(loc, rows_idx, cols_idx, shape):
    nc, ni, nj = loc.shape
    rows = np.broadcast_to(rows_idx[:, :, None], (nc, ni, nj))
    cols = np.broadcast_to(cols_idx[:, None, :], (nc, ni, nj))
    mat = sp.coo_matrix(
        (loc.ravel(), (rows.ravel(), cols.ravel())), shape=shape
    )
    return mat.tocsr()


@dataclass
class OperatorSet:
    """Assembled matrices plus the geometry tables needed for reassembly."""

    A: sp.csr_matrix          # viscous block, n_vel x n_vel
    B: sp.csr_matrix          # divergence coupling, n_p x n_vel
    Xu: sp.csr_matrix         # H1 inner product on velocity
    Xp: sp.csr_matrix         # L2 inner product on pressure
    lifting: np.ndarray       # boundary-data carrier, length n_vel
    f: np.ndarray             # -A @ lifting
    g: np.ndarray             # -B @ lifting
    nu: float
    space: object
    det: np.ndarray
    inv_jt: np.ndarray

    _xu_free_solve: object = None

    @property
    def n_velocity(self):
        return self.A.shape[0]

    @property
    def n_pressure(self):
        return self.B.shape[0]

    def with_viscosity(self, nu_new):
        """Same mesh and data, rescaled viscous block (for continuation)."""
        scale = nu_new / self.nu
        return OperatorSet(
            A=self.A * scale,
            B=self.B,
            Xu=self.Xu,
            Xp=self.Xp,
            lifting=self.lifting,
            f=self.f * scale,
            g=self.g,
            nu=nu_new,
            space=self.space,
            det=self.det,
            inv_jt=self.inv_jt,
        )

    def xu_free_solve(self, rhs):
        """Solve Xu restricted to free dofs (cached factorization)."""
        if self._xu_free_solve is None:
            free = self.space.free_velocity
            self._xu_free_solve = sp.linalg.splu(
                self.Xu[free][:, free].tocsc()
            )
        return self._xu_free_solve.solve(rhs)


def assemble_operators(mesh, space, physics):
    """Viscous, divergence and inner-product matrices plus lifting data."""
    det, inv_jt = kernels.triangle_geometry(mesh.nodes, space.triangles)
    if np.any(det <= 0.0):
        raise ConfigError("mesh has non-positive cells; cannot assemble")

    ke, me = kernels.stiffness_mass_local(det, inv_jt)
    gxe, gye = kernels.divergence_local(det, inv_jt)
    mpe = kernels.pressure_mass_local(det)

    ns = space.n_scalar
    np_ = space.n_pressure
    c6 = space.cells6
    c3 = space.triangles

    K = _scatter(ke, c6, c6, (ns, ns))
    M = _scatter(me, c6, c6, (ns, ns))
    Gx = _scatter(gxe, c3, c6, (np_, ns))
    Gy = _scatter(gye, c3, c6, (np_, ns))
    Mp = _scatter(mpe, c3, c3, (np_, np_))

    A = sp.block_diag((physics.viscosity * K, physics.viscosity * K)).tocsr()
    B = (-sp.hstack([Gx, Gy])).tocsr()
    H1 = (K + M).tocsr()
    Xu = sp.block_diag((H1, H1)).tocsr()

    lifting = inlet_lifting(space, mesh, physics)
    return OperatorSet(
        A=A,
        B=B,
        Xu=Xu,
        Xp=Mp.tocsr(),
        lifting=lifting,
        f=-A @ lifting,
        g=-B @ lifting,
        nu=physics.viscosity,
        space=space,
        det=det,
        inv_jt=inv_jt,
    )


def _cell_velocity(ops, w):
    space = ops.space
    if w.shape != (space.n_velocity,):
        raise ConfigError(
            f"velocity vector has length {w.shape}, expected {space.n_velocity}"
        )
    w1e = w[space.cells6]
    w2e = w[space.n_scalar + space.cells6]
    return np.ascontiguousarray(w1e), np.ascontiguousarray(w2e)


def assemble_convection(ops, w):
    """Advection matrix C(w): entries int ((w . grad) phi_j) phi_i per component."""
    space = ops.space
    w1e, w2e = _cell_velocity(ops, w)
    ce = kernels.convection_local(ops.det, ops.inv_jt, w1e, w2e)
    ns = space.n_scalar
    Cs = _scatter(ce, space.cells6, space.cells6, (ns, ns))
    return sp.block_diag((Cs, Cs)).tocsr()


def assemble_gradient_coupling(ops, w):
    """Jacobian block D(w): entries int phi_i phi_j d(w_a)/d(x_b), 2x2 blocks."""
    space = ops.space
    w1e, w2e = _cell_velocity(ops, w)
    d11, d12, d21, d22 = kernels.gradient_coupling_local(
        ops.det, ops.inv_jt, w1e, w2e
    )
    ns = space.n_scalar
    blocks = [
        [_scatter(d11, space.cells6, space.cells6, (ns, ns)),
         _scatter(d12, space.cells6, space.cells6, (ns, ns))],
        [_scatter(d21, space.cells6, space.cells6, (ns, ns)),
         _scatter(d22, space.cells6, space.cells6, (ns, ns))],
    ]
    return sp.bmat(blocks).tocsr()
