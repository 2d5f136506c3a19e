import numpy as np
import pytest

from asrom.errors import ConfigError, NumericalError
from asrom.fem import (
    PhysicsConfig,
    assemble_operators,
    build_space,
    newton_solve,
    qoi,
    solve_flow,
    supremizer,
)
from asrom.geometry import generate_channel_mesh, morph_mesh
from asrom.rom import (
    PODBasis,
    build_reduced_spaces,
    collect_snapshots,
    error_report,
    pod,
    project_convection,
    project_operators,
    read_pod_basis,
    reduced_inf_sup,
    reorthonormalize,
    rom_solve,
    write_error_report,
    write_pod_basis,
    write_singular_values,
)


@pytest.fixture(scope="module")
def study(bif_mesh, bif_space, physics, bif_layout, morph_config, bif_ops):
    def hf3(mu):
        morphed = morph_mesh(bif_mesh, bif_layout.cps, np.asarray(mu), morph_config)
        sol, ops = solve_flow(morphed, bif_space, physics, mu=np.asarray(mu))
        return sol, ops, morphed

    def hf_snap(mu):
        sol, ops, _ = hf3(mu)
        return sol, ops, supremizer(ops, sol.p)

    rng = np.random.default_rng(99)
    train = rng.uniform(0.0, 0.3, (8, 10))
    snaps = collect_snapshots(train, hf_snap)
    basis = build_reduced_spaces(snaps, bif_ops, n_u=8)
    return train, snaps, basis, hf3


class TestSnapshots:
    def test_columns_divergence_free(self, study, bif_ops, bif_layout, bif_mesh,
                                     morph_config, bif_space, physics):
        train, snaps, _, _ = study
        # each velocity column satisfies its own mesh's continuity equation
        for j in range(snaps.n_snapshots):
            morphed = morph_mesh(
                bif_mesh, bif_layout.cps, snaps.parameters[j], morph_config
            )
            ops_j = assemble_operators(morphed, bif_space, physics)
            assert np.abs(ops_j.B @ snaps.S_u[:, j]).max() <= 1e-9

    def test_duplicate_parameters_identical_columns(
        self, bif_mesh, bif_space, physics, bif_layout, morph_config
    ):
        def hf_snap(mu):
            morphed = morph_mesh(bif_mesh, bif_layout.cps, np.asarray(mu), morph_config)
            sol, ops = solve_flow(morphed, bif_space, physics, mu=np.asarray(mu))
            return sol, ops, supremizer(ops, sol.p)

        mu = np.full(10, 0.12)
        snaps = collect_snapshots([mu, mu], hf_snap)
        assert np.array_equal(snaps.S_u[:, 0], snaps.S_u[:, 1])
        assert np.array_equal(snaps.S_p[:, 0], snaps.S_p[:, 1])

    def test_failures_are_skipped(self, bif_ops):
        calls = {"n": 0}

        def flaky(mu):
            calls["n"] += 1
            raise NumericalError("boom")

        with pytest.raises(NumericalError):
            collect_snapshots(np.zeros((3, 10)), flaky)
        assert calls["n"] == 3


class TestBasis:
    def test_minimal_counts(self, study, bif_ops):
        _, snaps, _, _ = study
        b = build_reduced_spaces(snaps, bif_ops, n_u=1, n_s=1, n_p=1)
        assert b.Z_us.shape[1] == 2
        assert b.Z_p.shape[1] == 1

    def test_orthonormality(self, study, bif_ops):
        _, _, basis, _ = study
        Z = basis.Z_us
        assert np.abs(Z.T @ (bif_ops.Xu @ Z) - np.eye(Z.shape[1])).max() <= 1e-8
        Zp = basis.Z_p
        assert np.abs(Zp.T @ (bif_ops.Xp @ Zp) - np.eye(Zp.shape[1])).max() <= 1e-8

    def test_modes_vanish_on_constrained_dofs(self, study, bif_space):
        _, _, basis, _ = study
        constrained = np.concatenate(
            [bif_space.constrained_scalar(),
             bif_space.n_scalar + bif_space.constrained_scalar()]
        )
        assert np.abs(basis.Z_us[constrained]).max() <= 1e-12

    def test_supremizers_raise_reduced_coupling(self, study, bif_ops):
        _, snaps, _, _ = study
        with_sup = build_reduced_spaces(snaps, bif_ops, n_u=4, n_s=4, n_p=4)
        no_sup = build_reduced_spaces(snaps, bif_ops, n_u=8, n_s=1, n_p=4)
        stripped = PODBasis(
            velocity_modes=no_sup.velocity_modes,
            supremizer_modes=np.zeros((bif_ops.n_velocity, 0)),
            pressure_modes=no_sup.pressure_modes,
            sigma_velocity=no_sup.sigma_velocity,
            sigma_supremizer=np.zeros(0),
            sigma_pressure=no_sup.sigma_pressure,
            lifting=no_sup.lifting,
            Xu=no_sup.Xu,
            Xp=no_sup.Xp,
        )
        red_sup = project_operators(bif_ops, with_sup)
        red_no = project_operators(bif_ops, stripped)
        s_with = reduced_inf_sup(red_sup)
        s_without = reduced_inf_sup(red_no)
        assert s_with > 0.0
        assert s_with > s_without


class TestProjection:
    def test_reduced_viscous_block_congruent(self, study, bif_ops):
        _, _, basis, _ = study
        red = project_operators(bif_ops, basis)
        Z = basis.Z_us
        again = Z.T @ (bif_ops.A @ Z)
        assert np.abs(red.A_N - again).max() <= 1e-10
        assert np.abs(red.A_N - red.A_N.T).max() <= 1e-12 * np.abs(red.A_N).max()

    def test_projected_advection_linear(self, study, bif_ops, rng):
        _, _, basis, _ = study
        red = project_operators(bif_ops, basis)
        n = basis.Z_us.shape[1]
        w1 = rng.standard_normal(n)
        w2 = rng.standard_normal(n)
        lhs = project_convection(red, 2.0 * w1 - 3.0 * w2)
        rhs = 2.0 * project_convection(red, w1) - 3.0 * project_convection(red, w2)
        assert np.abs(lhs - rhs).max() <= 1e-10 * max(np.abs(rhs).max(), 1.0)

    def test_complete_basis_reproduces_full_solution(self):
        # tiny straight channel; the reduced space spans every free dof
        mesh = generate_channel_mesh(6.0, 1.0, 2)
        space = build_space(mesh)
        phys = PhysicsConfig(viscosity=0.1, inlet_peak=1.0, reference_width=1.0)
        ops = assemble_operators(mesh, space, phys)
        hf = newton_solve(ops)

        nf = space.free_velocity.size
        inject = np.zeros((space.n_velocity, nf))
        inject[space.free_velocity, np.arange(nf)] = 1.0
        Zv = reorthonormalize(inject, ops.Xu)
        Zp = reorthonormalize(np.eye(space.n_pressure), ops.Xp)
        basis = PODBasis(
            velocity_modes=Zv,
            supremizer_modes=np.zeros((space.n_velocity, 0)),
            pressure_modes=Zp,
            sigma_velocity=np.ones(nf),
            sigma_supremizer=np.zeros(0),
            sigma_pressure=np.ones(space.n_pressure),
            lifting=ops.lifting,
            Xu=ops.Xu,
            Xp=ops.Xp,
        )
        red = project_operators(ops, basis)
        rom = rom_solve(red)
        assert np.abs(rom.u - hf.u).max() <= 1e-8
        assert np.abs(rom.p - hf.p).max() <= 1e-8


class TestReducedSolve:
    def test_training_point_consistency(self, study, bif_ops):
        train, _, basis, hf3 = study
        mu = train[2]
        sol, ops_mu, morphed = hf3(mu)
        red = project_operators(ops_mu, basis, mu=mu)
        rom = rom_solve(red, initial_guess=basis.project_state(sol.u, sol.p))
        rom.qoi = qoi(rom, morphed)
        assert abs(rom.qoi - sol.qoi) / abs(sol.qoi) <= 1e-6
        assert rom.residual_norm <= 1e-10

    def test_zero_pressure_modes_rejected(self, study, bif_ops):
        _, _, basis, _ = study
        empty = PODBasis(
            velocity_modes=basis.velocity_modes,
            supremizer_modes=basis.supremizer_modes,
            pressure_modes=np.zeros((bif_ops.n_pressure, 0)),
            sigma_velocity=basis.sigma_velocity,
            sigma_supremizer=basis.sigma_supremizer,
            sigma_pressure=np.zeros(0),
            lifting=basis.lifting,
            Xu=basis.Xu,
            Xp=basis.Xp,
        )
        red = project_operators(bif_ops, empty)
        with pytest.raises(ConfigError):
            rom_solve(red)

    def test_truncation_guard(self, study):
        _, _, basis, _ = study
        with pytest.raises(ConfigError):
            basis.truncated(basis.n_velocity + 1, 1, 1)


class TestErrorReport:
    def test_reproduction_on_training_subset(self, study):
        train, snaps, basis, hf3 = study
        rows, failures = error_report(
            basis, train[:3], hf3, [snaps.n_snapshots], qoi_fn=qoi
        )
        assert not failures
        assert rows[0].err_u <= 1e-6
        assert rows[0].err_p <= 1e-5
        assert rows[0].n_points == 3

    def test_errors_finite_and_nonnegative(self, study, rng):
        _, _, basis, hf3 = study
        test = rng.uniform(0.0, 0.3, (2, 10))
        rows, _ = error_report(basis, test, hf3, [2, 4], qoi_fn=qoi)
        for r in rows:
            assert np.isfinite([r.err_u, r.err_p, r.err_qoi]).all()
            assert r.err_u >= 0.0 and r.err_p >= 0.0 and r.err_qoi >= 0.0


class TestPersistence:
    def test_basis_round_trip(self, tmp_path, study, bif_ops):
        _, _, basis, _ = study
        path = tmp_path / "basis.txt"
        write_pod_basis(basis, path)
        back = read_pod_basis(path, bif_ops.Xu, bif_ops.Xp)
        assert np.array_equal(back.velocity_modes, basis.velocity_modes)
        assert np.array_equal(back.supremizer_modes, basis.supremizer_modes)
        assert np.array_equal(back.pressure_modes, basis.pressure_modes)
        assert np.array_equal(back.sigma_velocity, basis.sigma_velocity)
        assert np.array_equal(back.lifting, basis.lifting)

    def test_error_report_csv(self, tmp_path, study):
        train, _, basis, hf3 = study
        rows, _ = error_report(basis, train[:2], hf3, [2], qoi_fn=qoi)
        path = tmp_path / "errors.csv"
        write_error_report(rows, "rom", path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "N,err_u,err_p,err_qoi,variant"
        assert lines[1].endswith(",rom")
        with pytest.raises(ConfigError):
            write_error_report(rows, "bogus", path)

    def test_singular_values_csv(self, tmp_path, study):
        _, _, basis, _ = study
        path = tmp_path / "sv.csv"
        write_singular_values(basis, "rom_as", path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "family,index,sigma,variant"
        families = {ln.split(",")[0] for ln in lines[1:]}
        assert families == {"velocity", "supremizer", "pressure"}
