import numpy as np
import pytest
import scipy.sparse.linalg as spla

from asrom.errors import ConfigError
from asrom.fem import (
    PhysicsConfig,
    assemble_convection,
    assemble_gradient_coupling,
    assemble_operators,
    build_space,
)
from asrom.geometry import Mesh, generate_channel_mesh


def test_viscous_block_symmetric(bif_ops):
    assert abs(bif_ops.A - bif_ops.A.T).max() <= 1e-12 * abs(bif_ops.A).max()


def test_inner_products_positive_definite(bif_ops, rng):
    for X in (bif_ops.Xu, bif_ops.Xp):
        for _ in range(5):
            v = rng.standard_normal(X.shape[0])
            assert v @ (X @ v) > 0.0


def test_translation_in_nullspace_of_viscous_block(bif_ops, bif_space):
    ns = bif_space.n_scalar
    for comp in range(2):
        trans = np.zeros(bif_ops.n_velocity)
        trans[comp * ns : (comp + 1) * ns] = 1.0
        assert np.abs(bif_ops.A @ trans).max() <= 1e-10


def test_divergence_theorem_zero_flux_field(bif_ops, bif_space, rng):
    # any velocity vanishing on the whole boundary has zero net divergence
    u = np.zeros(bif_ops.n_velocity)
    u[bif_space.free_velocity] = rng.standard_normal(bif_space.free_velocity.size)
    outlet = np.concatenate(
        [bif_space.outlet_scalar, bif_space.n_scalar + bif_space.outlet_scalar]
    )
    u[outlet] = 0.0
    q = np.ones(bif_ops.n_pressure)
    assert abs(q @ (bif_ops.B @ u)) <= 1e-10


def test_h1_form_matches_hand_integration():
    # one reference triangle; quadratic field interpolated exactly;
    # integral of |grad u|^2 + |u|^2 computed symbolically = 3758/45
    mesh = Mesh(
        nodes=np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
        triangles=np.array([[0, 1, 2]]),
        boundary_edges=np.array([[0, 1], [1, 2], [2, 0]]),
        boundary_tags=np.array(["wall", "wall", "wall"]),
        sections=[],
    )
    space = build_space(mesh)
    phys = PhysicsConfig(viscosity=1.0)
    ops = assemble_operators(mesh, space, phys)
    coords = space.scalar_dof_coords(mesh)
    x, y = coords[:, 0], coords[:, 1]
    u = np.concatenate(
        [
            1 + 2 * x + 3 * y + 4 * x**2 + 5 * x * y + 6 * y**2,
            2 - x + y + x**2 - 2 * x * y + 3 * y**2,
        ]
    )
    val = u @ (ops.Xu @ u)
    assert val == pytest.approx(3758.0 / 45.0, rel=1e-12)


class TestConvection:
    def test_zero_field_gives_zero(self, bif_ops):
        C = assemble_convection(bif_ops, np.zeros(bif_ops.n_velocity))
        assert abs(C).max() == 0.0

    def test_linearity(self, bif_ops, rng):
        w1 = rng.standard_normal(bif_ops.n_velocity)
        w2 = rng.standard_normal(bif_ops.n_velocity)
        a, b = 0.3, -1.7
        lhs = assemble_convection(bif_ops, a * w1 + b * w2)
        rhs = a * assemble_convection(bif_ops, w1) + b * assemble_convection(bif_ops, w2)
        scale = abs(rhs).max()
        assert abs(lhs - rhs).max() <= 1e-12 * scale

    def test_dimension_mismatch(self, bif_ops):
        with pytest.raises(ConfigError):
            assemble_convection(bif_ops, np.zeros(3))

    def test_constant_field_matches_brute_force(self):
        # two-cell mesh; advection with w=(c,0) checked against an
        # independently integrated first-derivative block (exact reference
        # integrals of quadratic basis products, affine-mapped by hand)
        mesh = Mesh(
            nodes=np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]),
            triangles=np.array([[0, 1, 2], [0, 2, 3]]),
            boundary_edges=np.array([[0, 1], [1, 2], [2, 3], [3, 0]]),
            boundary_tags=np.array(["wall"] * 4),
            sections=[],
        )
        space = build_space(mesh)
        ops = assemble_operators(mesh, space, PhysicsConfig(viscosity=1.0))
        c = 2.5
        w = np.zeros(space.n_velocity)
        w[: space.n_scalar] = c
        C = assemble_convection(ops, w).toarray()

        import sympy as sp

        xi, eta = sp.symbols("xi eta")
        lam = [1 - xi - eta, xi, eta]
        basis = [l * (2 * l - 1) for l in lam] + [
            4 * lam[0] * lam[1],
            4 * lam[1] * lam[2],
            4 * lam[2] * lam[0],
        ]
        ns = space.n_scalar
        expected = np.zeros((ns, ns))
        for cell in range(2):
            tri = space.triangles[cell]
            p = mesh.nodes[tri]
            J = np.stack([p[1] - p[0], p[2] - p[0]], axis=1)
            inv_jt = np.linalg.inv(J).T
            det = abs(np.linalg.det(J))
            for i in range(6):
                for j in range(6):
                    gj = sp.Matrix([sp.diff(basis[j], xi), sp.diff(basis[j], eta)])
                    dxj = inv_jt[0, 0] * gj[0] + inv_jt[0, 1] * gj[1]
                    val = sp.integrate(
                        sp.integrate(basis[i] * dxj, (eta, 0, 1 - xi)), (xi, 0, 1)
                    )
                    expected[space.cells6[cell, i], space.cells6[cell, j]] += (
                        c * det * float(val)
                    )
        assert np.abs(C[:ns, :ns] - expected).max() <= 1e-12 * np.abs(expected).max()
        # the two components carry the same scalar block
        assert np.abs(C[ns:, ns:] - C[:ns, :ns]).max() == 0.0


def test_gradient_coupling_consistency(bif_ops, rng):
    # d/du [C(u) u] = C(u) + D(u): finite difference on the quadratic term
    n = bif_ops.n_velocity
    u = rng.standard_normal(n)
    d = rng.standard_normal(n)
    eps = 1e-7
    C_u = assemble_convection(bif_ops, u)
    D_u = assemble_gradient_coupling(bif_ops, u)
    analytic = (C_u + D_u) @ d
    f_plus = assemble_convection(bif_ops, u + eps * d) @ (u + eps * d)
    f_minus = assemble_convection(bif_ops, u - eps * d) @ (u - eps * d)
    fd = (f_plus - f_minus) / (2 * eps)
    assert np.linalg.norm(fd - analytic) <= 1e-6 * np.linalg.norm(analytic)


def test_quadrature_exact_for_quadratic_mass():
    # H1 matrix reproduces the exact squared L2 norm of a quadratic on a
    # single cell (mass part): covered by the hand-integration test; here
    # check the pressure mass integrates linears exactly on the channel
    mesh = generate_channel_mesh(2.0, 1.0, 4)
    space = build_space(mesh)
    ops = assemble_operators(mesh, space, PhysicsConfig(viscosity=1.0))
    p = 1.0 + 2.0 * mesh.nodes[:, 0] + 3.0 * mesh.nodes[:, 1]
    # integral of p^2 over [0,2]x[0,1] = 134/3
    assert p @ (ops.Xp @ p) == pytest.approx(134.0 / 3.0, rel=1e-13)
