import numpy as np
import pytest

from asrom.errors import DegenerateQoIError, NonConvergence
from asrom.fem import (
    PhysicsConfig,
    assemble_operators,
    build_space,
    inf_sup_constant,
    newton_solve,
    qoi,
    read_hf_solution,
    read_matrix,
    residual,
    section_pressure_average,
    section_pressures,
    solve_flow,
    solve_with_continuation,
    stokes_solve,
    supremizer,
    write_hf_solution,
    write_matrix,
)
from asrom.geometry import generate_bifurcation_mesh, generate_channel_mesh, morph_mesh

H, L, U = 1.0, 5.0, 1.0
NU = 0.02


@pytest.fixture(scope="module")
def channel():
    mesh = generate_channel_mesh(L, H, 4, section_fractions=[0.2, 0.3, 0.4, 0.5, 0.6, 0.8])
    space = build_space(mesh)
    phys = PhysicsConfig(viscosity=NU, inlet_peak=U, reference_width=H)
    ops = assemble_operators(mesh, space, phys)
    return mesh, space, phys, ops


class TestPoiseuille:
    def test_exact_parabolic_flow(self, channel):
        mesh, space, phys, ops = channel
        sol = newton_solve(ops)
        assert sol.iterations <= 5
        coords = space.scalar_dof_coords(mesh)
        ns = space.n_scalar
        ux = U * 4.0 * coords[:, 1] * (H - coords[:, 1]) / H**2
        err_u = max(
            np.abs(sol.u[:ns] - ux).max(), np.abs(sol.u[ns:]).max()
        )
        assert err_u <= 1e-9
        p_exact = (L - mesh.nodes[:, 0]) * 8.0 * NU * U / H**2
        assert np.abs(sol.p - p_exact).max() <= 1e-9

    def test_pressure_drop_between_sections(self, channel):
        mesh, space, phys, ops = channel
        sol = newton_solve(ops)
        # sections at x = 1 and x = 4
        p1 = section_pressure_average(sol.p, mesh, mesh.sections[0])
        p4 = section_pressure_average(sol.p, mesh, mesh.sections[5])
        assert p1 - p4 == pytest.approx(3.0 * 8.0 * NU * U / H**2, rel=1e-8)

    def test_error_measured_in_velocity_inner_product(self, channel):
        mesh, space, phys, ops = channel
        sol = newton_solve(ops)
        coords = space.scalar_dof_coords(mesh)
        ns = space.n_scalar
        exact = np.concatenate(
            [U * 4.0 * coords[:, 1] * (H - coords[:, 1]) / H**2, np.zeros(ns)]
        )
        diff = sol.u - exact
        err = np.sqrt(diff @ (ops.Xu @ diff))
        assert err <= 1e-9


def test_stokes_regime_converges_immediately(channel):
    mesh, space, phys, ops = channel
    big = ops.with_viscosity(1e6)
    sol = newton_solve(big)
    assert sol.iterations <= 1


def test_residual_of_solution_below_tolerance(bif_mesh, bif_space, physics):
    ops = assemble_operators(bif_mesh, bif_space, physics)
    sol = newton_solve(ops)
    r_u, r_p = residual(ops, sol.u, sol.p)
    assert np.sqrt(r_u @ r_u + r_p @ r_p) <= 1e-10


def test_divergence_free_at_convergence(bif_mesh, bif_space, physics):
    ops = assemble_operators(bif_mesh, bif_space, physics)
    sol = newton_solve(ops)
    assert np.abs(ops.B @ sol.u).max() <= 1e-10


def test_nonconvergence_carries_history(bif_mesh, bif_space, physics):
    ops = assemble_operators(bif_mesh, bif_space, physics)
    with pytest.raises(NonConvergence) as err:
        newton_solve(ops, max_iter=1, tol_abs=1e-14, tol_rel=1e-14)
    assert len(err.value.history) >= 1


def test_continuation_matches_direct(bif_mesh, bif_space, physics):
    ops = assemble_operators(bif_mesh, bif_space, physics)
    direct = newton_solve(ops)
    chained = solve_with_continuation(ops)
    assert np.abs(direct.u - chained.u).max() <= 1e-7


class TestJacobian:
    def test_directional_derivative(self, bif_ops, bif_space, rng):
        from asrom.fem import assemble_convection, assemble_gradient_coupling
        import scipy.sparse as sp

        free = bif_space.free_velocity
        for _ in range(3):
            u = bif_ops.lifting.copy()
            u[free] += 0.5 * rng.standard_normal(free.size)
            p = rng.standard_normal(bif_ops.n_pressure)
            du = rng.standard_normal(free.size)
            dp = rng.standard_normal(bif_ops.n_pressure)
            eps = 1e-6

            C = assemble_convection(bif_ops, u)
            D = assemble_gradient_coupling(bif_ops, u)
            Avv = bif_ops.A + C + D
            j_u = (Avv[free][:, free] @ du) + (bif_ops.B[:, free].T @ dp)
            j_p = bif_ops.B[:, free] @ du

            u2 = u.copy()
            u2[free] += eps * du
            r1u, r1p = residual(bif_ops, u2, p + eps * dp)
            r0u, r0p = residual(bif_ops, u, p)
            fd_u = (r1u - r0u) / eps
            fd_p = (r1p - r0p) / eps
            num = np.sqrt(
                np.linalg.norm(fd_u - j_u) ** 2 + np.linalg.norm(fd_p - j_p) ** 2
            )
            den = np.sqrt(np.linalg.norm(j_u) ** 2 + np.linalg.norm(j_p) ** 2)
            assert num / den <= 1e-5


class TestSupremizer:
    def test_zero_pressure(self, bif_ops):
        assert np.abs(supremizer(bif_ops, np.zeros(bif_ops.n_pressure))).max() == 0.0

    def test_linearity(self, bif_ops, rng):
        p1 = rng.standard_normal(bif_ops.n_pressure)
        p2 = rng.standard_normal(bif_ops.n_pressure)
        s12 = supremizer(bif_ops, p1 + p2)
        s1 = supremizer(bif_ops, p1)
        s2 = supremizer(bif_ops, p2)
        assert np.abs(s12 - s1 - s2).max() <= 1e-12 * np.abs(s12).max()

    def test_riesz_identity_and_sup_attainment(self, bif_ops, rng):
        p = rng.standard_normal(bif_ops.n_pressure)
        s = supremizer(bif_ops, p)
        norm_s2 = s @ (bif_ops.Xu @ s)
        b_sp = p @ (bif_ops.B @ s)
        assert abs(norm_s2 - b_sp) <= 1e-10 * abs(norm_s2)
        # the coupling-over-norm ratio at s equals the norm of s
        assert b_sp / np.sqrt(norm_s2) == pytest.approx(np.sqrt(norm_s2), rel=1e-10)


class TestInfSup:
    def test_positive_on_reference(self, bif_ops):
        beta = inf_sup_constant(bif_ops)
        assert beta > 1e-3

    def test_stable_under_refinement(self):
        phys = PhysicsConfig(viscosity=0.02, inlet_peak=1.0, reference_width=2.0)
        betas = []
        for res in (4, 8, 12):
            mesh = generate_bifurcation_mesh(4.0, 6.0, 2.0, 30.0, res)
            space = build_space(mesh)
            ops = assemble_operators(mesh, space, phys)
            betas.append(inf_sup_constant(ops))
        assert min(betas) > 1e-3
        # no collapse towards zero under refinement
        assert betas[-1] > 0.25 * betas[0]

    def test_rayleigh_upper_bound(self, bif_ops, rng):
        beta2 = inf_sup_constant(bif_ops) ** 2
        for _ in range(100):
            q = rng.standard_normal(bif_ops.n_pressure)
            s = supremizer(bif_ops, q)
            quotient = (s @ (bif_ops.Xu @ s)) / (q @ (bif_ops.Xp @ q))
            assert beta2 <= quotient * (1.0 + 1e-8)


class TestQoI:
    def test_symmetric_parameters_equal_addends(
        self, bif_mesh, bif_space, physics, bif_layout, morph_config
    ):
        mu = np.full(10, 0.2)
        morphed = morph_mesh(bif_mesh, bif_layout.cps, mu, morph_config)
        sol, _ = solve_flow(morphed, bif_space, physics, mu=mu)
        P = section_pressures(sol, morphed).values
        a1 = (P[3] - P[4]) / (P[0] - P[1])
        a2 = (P[3] - P[5]) / (P[0] - P[2])
        assert a1 == pytest.approx(a2, abs=1e-8)

    def test_uniform_pressure_degenerate(self, bif_mesh, bif_space, physics):
        ops = assemble_operators(bif_mesh, bif_space, physics)
        sol = newton_solve(ops)
        sol.p = np.full_like(sol.p, 7.0)
        with pytest.raises(DegenerateQoIError):
            qoi(sol, bif_mesh)

    def test_monotone_in_occlusion(
        self, bif_mesh, bif_space, physics, bif_layout, morph_config
    ):
        values = []
        for level in (0.0, 0.15, 0.3):
            mu = np.full(10, level)
            mesh_l = (
                bif_mesh
                if level == 0.0
                else morph_mesh(bif_mesh, bif_layout.cps, mu, morph_config)
            )
            sol, _ = solve_flow(mesh_l, bif_space, physics, mu=mu)
            values.append(sol.qoi)
        assert values[0] < values[1] < values[2]

    def test_constant_pressure_average(self, channel):
        mesh, space, phys, ops = channel
        p = np.full(mesh.num_nodes, 7.0)
        for sec in mesh.sections:
            assert section_pressure_average(p, mesh, sec) == pytest.approx(7.0, abs=1e-12)

    def test_linear_pressure_average_on_vertical_cut(self, channel):
        mesh, space, phys, ops = channel
        p = mesh.nodes[:, 0].copy()
        # section 2 sits at x = 0.4 * 5 = 2
        assert section_pressure_average(p, mesh, mesh.sections[2]) == pytest.approx(
            2.0, abs=1e-12
        )


class TestSerialization:
    def test_hf_solution_round_trip(self, tmp_path, channel):
        mesh, space, phys, ops = channel
        sol = newton_solve(ops)
        sol.mu = np.array([0.1, 0.2])
        sol.qoi = 1.25
        path = tmp_path / "sol.txt"
        write_hf_solution(sol, path)
        back = read_hf_solution(path)
        assert np.array_equal(back.u, sol.u)
        assert np.array_equal(back.p, sol.p)
        assert np.array_equal(back.mu, sol.mu)
        assert back.qoi == sol.qoi

    def test_matrix_round_trip_sorted(self, tmp_path, bif_ops):
        path = tmp_path / "B.txt"
        write_matrix(bif_ops.B, path)
        with open(path) as fh:
            header = fh.readline().split()
            assert header[:2] == ["MATRIX", "v1"]
            prev = (-1, -1)
            for line in fh:
                i, j, _ = line.split()
                cur = (int(i), int(j))
                assert cur > prev
                prev = cur
        back = read_matrix(path)
        assert abs(back - bif_ops.B).max() == 0.0
