"""Offline/online study stages behind the command-line tool.

Every stage is a pure function of (config, seeds): identical inputs give
byte-identical data artifacts.  The only parallel region is the batch of
high-fidelity solves inside the training stages; results are reordered by
sample index before anything is written.
"""

import functools
import json
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .. import asub
from ..asub import (
    ActiveSubspace,
    SampleSet,
    lift,
    local_linear_gradients,
    project_active,
    sample_parameters,
    sufficient_summary,
    surrogate_error_grid,
)
from ..errors import ConfigError, NumericalError
from ..fem import (
    assemble_operators,
    build_space,
    qoi as qoi_of,
    solve_with_continuation,
    supremizer,
)
from ..geometry import (
    aspect_ratio_report,
    bifurcation_control_points,
    generate_bifurcation_mesh,
    morph_mesh,
    read_mesh,
    write_mesh,
)
from ..rom import (
    error_report,
    read_pod_basis,
    write_error_report,
    write_pod_basis,
    write_singular_values,
)
from ..rom.snapshots import build_reduced_spaces, snapshots_from_results
from .manifest import StageTimer, update_manifest
from .synthetic import synthetic_qoi


def _fmt(x):
    return format(float(x), ".17g")


def _out(outdir):
    p = Path(outdir)
    p.mkdir(parents=True, exist_ok=True)
    return p


# ---- shared construction ----------------------------------------------------

def build_study_geometry(config):
    geo = config.geometry
    mesh = generate_bifurcation_mesh(
        geo["inlet_length"],
        geo["branch_length"],
        geo["channel_width"],
        geo["branch_angle_deg"],
        geo["resolution"],
    )
    layout = bifurcation_control_points(
        geo["inlet_length"],
        geo["branch_length"],
        geo["channel_width"],
        geo["branch_angle_deg"],
        geo["resolution"],
        config.n_movable,
    )
    return mesh, layout


def _require(path, stage, needed_by):
    if not Path(path).exists():
        raise ConfigError(
            f"{needed_by} needs {path}; run the {stage} stage first"
        )
    return path


def _load_mesh(config, outdir):
    path = _require(Path(outdir) / "mesh.txt", "mesh", "this stage")
    return read_mesh(path), path


# ---- parallel workers (top-level for pickling) ------------------------------

def _solve_one(payload, mu):
    mesh, layout, morph_cfg, space, physics = payload
    morphed = morph_mesh(mesh, layout.cps, np.asarray(mu), morph_cfg)
    ops = assemble_operators(morphed, space, physics)
    sol = solve_with_continuation(ops)
    sol.mu = np.asarray(mu)
    sol.qoi = qoi_of(sol, morphed)
    return sol, ops, morphed


def _qoi_task(payload, mu):
    try:
        sol, _, _ = _solve_one(payload, mu)
        return True, float(sol.qoi), ""
    except NumericalError as exc:
        return False, float("nan"), str(exc)


def _snapshot_task(payload, mu):
    try:
        sol, ops, _ = _solve_one(payload, mu)
        return True, (sol.u, sol.p, supremizer(ops, sol.p)), ""
    except NumericalError as exc:
        return False, None, str(exc)


def _parallel_map(fn, items, n_jobs):
    if n_jobs <= 1:
        return [fn(x) for x in items]
    ctx = multiprocessing.get_context("fork")
    with ProcessPoolExecutor(max_workers=n_jobs, mp_context=ctx) as ex:
        return list(ex.map(fn, items))


def _hf_payload(config, mesh):
    layout = bifurcation_control_points(
        config.geometry["inlet_length"],
        config.geometry["branch_length"],
        config.geometry["channel_width"],
        config.geometry["branch_angle_deg"],
        config.geometry["resolution"],
        config.n_movable,
    )
    space = build_space(mesh)
    return (mesh, layout, config.morph_cfg, space, config.physics)


def _evaluate_qoi_batch(config, payload, params, what):
    """HF responses for a parameter batch; >10% failures abort the stage."""
    task = functools.partial(_qoi_task, payload)
    results = _parallel_map(task, list(params), config.n_jobs)
    ok = np.array([r[0] for r in results])
    n_failed = int(np.sum(~ok))
    if n_failed > 0.1 * len(results):
        raise NumericalError(
            f"{n_failed}/{len(results)} solves failed during {what}"
        )
    values = np.array([r[1] for r in results])[ok]
    failures = [
        (i, results[i][2]) for i in range(len(results)) if not results[i][0]
    ]
    return np.asarray(params)[ok], values, failures


# ---- stages ------------------------------------------------------------------

def cmd_mesh(config, outdir):
    """Generate the reference mesh and its control-point layout."""
    out = _out(outdir)
    with StageTimer() as t:
        mesh, layout = build_study_geometry(config)
        mesh_path = out / "mesh.txt"
        write_mesh(mesh, mesh_path)
        cp_path = out / "control_points.csv"
        with open(cp_path, "w") as fh:
            fh.write("x,y,movable,normal_x,normal_y\n")
            cps = layout.cps
            for i in range(cps.n_points):
                if i < cps.n_movable:
                    nx, ny = cps.normals[i]
                else:
                    nx, ny = 0.0, 0.0
                fh.write(
                    f"{_fmt(cps.positions[i, 0])},{_fmt(cps.positions[i, 1])},"
                    f"{int(i < cps.n_movable)},{_fmt(nx)},{_fmt(ny)}\n"
                )
    update_manifest(
        out,
        "mesh",
        config.config_hash,
        inputs=[],
        outputs=[mesh_path, cp_path],
        wall_clock=t.elapsed,
        stats={"nodes": mesh.num_nodes, "cells": mesh.num_triangles},
    )
    return [mesh_path, cp_path]


def _aspect_row(mesh, reference_max):
    rep = aspect_ratio_report(mesh, reference_max=reference_max)
    return rep.min, rep.max, rep.mean, rep.fraction_above_reference


def cmd_morph(config, outdir, mu=None):
    """Morph the reference mesh once (given mu) or audit the training batch.

    mu = 0 short-circuits to the identity (the interpolation problem is the
    identity analytically), which keeps the output byte-identical to the
    input mesh.
    """
    out = _out(outdir)
    mesh, mesh_path = _load_mesh(config, outdir)
    layout = bifurcation_control_points(
        config.geometry["inlet_length"],
        config.geometry["branch_length"],
        config.geometry["channel_width"],
        config.geometry["branch_angle_deg"],
        config.geometry["resolution"],
        config.n_movable,
    )
    ref_max = float(np.max(aspect_ratio_report(mesh).ratios))
    outputs = []
    stats = {"reference_max_aspect_ratio": ref_max}
    with StageTimer() as t:
        if mu is not None:
            mu = np.asarray(mu, dtype=float)
            if mu.shape != (config.n_movable,):
                raise ConfigError(
                    f"mu must have {config.n_movable} entries, got {mu.size}"
                )
            morphed = (
                mesh
                if np.all(mu == 0.0)
                else morph_mesh(mesh, layout.cps, mu, config.morph_cfg)
            )
            morphed_path = out / "morphed_mesh.txt"
            write_mesh(morphed, morphed_path)
            rep_path = out / "aspect_report.csv"
            mn, mx, mean, frac = _aspect_row(morphed, ref_max)
            with open(rep_path, "w") as fh:
                fh.write("min,max,mean,frac_above_ref_max\n")
                fh.write(f"{_fmt(mn)},{_fmt(mx)},{_fmt(mean)},{_fmt(frac)}\n")
            outputs = [morphed_path, rep_path]
        else:
            params = sample_parameters(
                config.active_subspace["n_train"],
                config.box_low,
                config.box_high,
                config.seeds["as_train"],
            )
            rep_path = out / "aspect_ratio.csv"
            n_failed = 0
            with open(rep_path, "w") as fh:
                fh.write("sample_index,min,max,mean,frac_above_ref_max\n")
                for i, m in enumerate(params):
                    try:
                        morphed = morph_mesh(mesh, layout.cps, m, config.morph_cfg)
                    except NumericalError:
                        n_failed += 1
                        fh.write(f"{i},nan,nan,nan,nan\n")
                        continue
                    mn, mx, mean, frac = _aspect_row(morphed, ref_max)
                    fh.write(
                        f"{i},{_fmt(mn)},{_fmt(mx)},{_fmt(mean)},{_fmt(frac)}\n"
                    )
            stats["n_failed_morphs"] = n_failed
            outputs = [rep_path]
    update_manifest(
        out,
        "morph",
        config.config_hash,
        inputs=[mesh_path],
        outputs=outputs,
        wall_clock=t.elapsed,
        stats=stats,
    )
    return outputs


def cmd_train_as(config, outdir, synthetic=None):
    """Sample the box, evaluate the response, identify the active subspace."""
    out = _out(outdir)
    cfg_as = config.active_subspace
    inputs = []
    with StageTimer() as t:
        params = sample_parameters(
            cfg_as["n_train"], config.box_low, config.box_high, config.seeds["as_train"]
        )
        test_params = sample_parameters(
            cfg_as["surface_test_size"],
            config.box_low,
            config.box_high,
            config.seeds["surface_test"],
        )
        failures = []
        if synthetic is not None:
            fn = synthetic_qoi(synthetic)
            values = np.asarray(fn(params)).ravel()
            test_values = np.asarray(fn(test_params)).ravel()
        else:
            mesh, mesh_path = _load_mesh(config, outdir)
            inputs.append(mesh_path)
            payload = _hf_payload(config, mesh)
            params, values, failures = _evaluate_qoi_batch(
                config, payload, params, "subspace training"
            )
            test_params, test_values, test_failures = _evaluate_qoi_batch(
                config, payload, test_params, "surface testing"
            )
            failures += test_failures

        samples = SampleSet(params, values, seed=config.seeds["as_train"])
        samples.check(config.box_low, config.box_high)
        grads = local_linear_gradients(samples, k=cfg_as["n_neighbors"])
        override = cfg_as["dimension"]
        subspace = ActiveSubspace.from_gradients(
            grads,
            M=None if override == "auto" else int(override),
            n_boot=cfg_as["n_bootstrap"],
            seed=config.seeds["bootstrap"],
        )

        test_set = SampleSet(test_params, test_values)
        grid = surrogate_error_grid(
            samples,
            test_set,
            subspace.W,
            cfg_as["surface_max_dim"],
            cfg_as["surface_max_order"],
        )

        paths = {
            "samples": out / "samples.csv",
            "gradients": out / "gradients.csv",
            "eigenvalues": out / "as_eigenvalues.csv",
            "eigenvectors": out / "as_eigenvectors.csv",
            "summary_1d": out / "summary_1d.csv",
            "summary_2d": out / "summary_2d.csv",
            "grid": out / "surrogate_grid.csv",
            "meta": out / "as_meta.json",
        }
        asub.write_samples(samples, paths["samples"])
        asub.write_gradients(grads, paths["gradients"])
        asub.write_eigen_table(subspace, paths["eigenvalues"])
        asub.write_eigenvector_table(subspace, paths["eigenvectors"])
        asub.write_summary_table(
            sufficient_summary(samples, subspace.W[:, :1]), paths["summary_1d"]
        )
        asub.write_summary_table(
            sufficient_summary(samples, subspace.W[:, :2]), paths["summary_2d"]
        )
        asub.write_error_grid(grid, paths["grid"])
        lam = subspace.eigenvalues
        gaps = (lam[:-1] / np.maximum(lam[1:], np.finfo(float).tiny)).tolist()
        paths["meta"].write_text(
            json.dumps(
                {
                    "active_dimension": subspace.M,
                    "dimension_mode": override,
                    "spectral_gaps": gaps,
                    "n_train_effective": int(samples.n_samples),
                },
                indent=2,
                sort_keys=True,
            )
            + "\n"
        )
    update_manifest(
        out,
        "train_as",
        config.config_hash,
        inputs=inputs,
        outputs=list(paths.values()),
        wall_clock=t.elapsed,
        stats={
            "n_failures": len(failures),
            "active_dimension": subspace.M,
            "synthetic": synthetic or "",
        },
    )
    return list(paths.values())


def _load_active_directions(config, outdir):
    meta_path = _require(Path(outdir) / "as_meta.json", "train-as", "this stage")
    vec_path = _require(Path(outdir) / "as_eigenvectors.csv", "train-as", "this stage")
    meta = json.loads(Path(meta_path).read_text())
    W = asub.read_eigenvector_table(vec_path)
    M = int(meta["active_dimension"])
    return W[:, :M], [meta_path, vec_path]


def _lift_batch(W1, params, box_low, box_high):
    lifted = np.empty_like(params)
    clamped = 0
    for i, mu in enumerate(params):
        lifted[i], n = lift(W1, project_active(W1, mu), box_low, box_high)
        clamped += n
    return lifted, clamped


def cmd_train_rom(config, outdir, variant):
    """Collect snapshots and build a reduced basis for one variant.

    rom trains on the full box; rom_as replaces each draw with its
    active-subspace representative (inactive part at the box center,
    clamped into the box).
    """
    if variant not in ("rom", "rom_as"):
        raise ConfigError("variant must be rom or rom_as")
    out = _out(outdir)
    mesh, mesh_path = _load_mesh(config, outdir)
    inputs = [mesh_path]
    clamp_count = 0
    with StageTimer() as t:
        if variant == "rom":
            params = sample_parameters(
                config.rom["n_train_full"],
                config.box_low,
                config.box_high,
                config.seeds["rom_full"],
            )
        else:
            raw = sample_parameters(
                config.rom["n_train_active"],
                config.box_low,
                config.box_high,
                config.seeds["rom_active"],
            )
            W1, as_inputs = _load_active_directions(config, outdir)
            inputs += as_inputs
            params, clamp_count = _lift_batch(
                W1, raw, config.box_low, config.box_high
            )

        payload = _hf_payload(config, mesh)
        task = functools.partial(_snapshot_task, payload)
        results = _parallel_map(task, list(params), config.n_jobs)
        n_failed = sum(1 for r in results if not r[0])
        if n_failed > 0.1 * len(results):
            raise NumericalError(
                f"{n_failed}/{len(results)} snapshot solves failed ({variant})"
            )
        snaps = snapshots_from_results(params, results)

        ref_ops = assemble_operators(mesh, payload[3], config.physics)
        n_modes = min(max(config.rom["mode_sweep"]), snaps.n_snapshots)
        basis = build_reduced_spaces(snaps, ref_ops, n_u=n_modes)

        basis_path = out / f"basis_{variant}.txt"
        write_pod_basis(basis, basis_path)
        sv_path = out / f"singular_values_{variant}.csv"
        write_singular_values(basis, variant, sv_path)
        snap_path = out / f"snapshots_{variant}.csv"
        with open(snap_path, "w") as fh:
            m = params.shape[1]
            fh.write(",".join(f"mu_{i + 1}" for i in range(m)) + ",ok\n")
            for i, mu in enumerate(params):
                fh.write(
                    ",".join(_fmt(v) for v in mu)
                    + f",{int(results[i][0])}\n"
                )
    update_manifest(
        out,
        f"train_rom_{variant}",
        config.config_hash,
        inputs=inputs,
        outputs=[basis_path, sv_path, snap_path],
        wall_clock=t.elapsed,
        stats={
            "n_failures": n_failed,
            "clamped_components": clamp_count,
            "n_modes": n_modes,
        },
    )
    return [basis_path, sv_path, snap_path]


def cmd_evaluate(config, outdir):
    """Error sweeps for both variants on one seed-fixed test set.

    The full-box variant is evaluated both at the raw test points (its own
    regime) and at their active-subspace representatives, which is the
    shared test set the two variants are compared on.
    """
    out = _out(outdir)
    mesh, mesh_path = _load_mesh(config, outdir)
    basis_rom_path = _require(out / "basis_rom.txt", "train-rom", "evaluate")
    basis_as_path = _require(out / "basis_rom_as.txt", "train-rom --variant rom_as", "evaluate")
    inputs = [mesh_path, basis_rom_path, basis_as_path]
    with StageTimer() as t:
        space = build_space(mesh)
        ref_ops = assemble_operators(mesh, space, config.physics)
        basis_rom = read_pod_basis(basis_rom_path, ref_ops.Xu, ref_ops.Xp)
        basis_as = read_pod_basis(basis_as_path, ref_ops.Xu, ref_ops.Xp)

        raw = sample_parameters(
            config.rom["n_test"], config.box_low, config.box_high, config.seeds["test"]
        )
        W1, as_inputs = _load_active_directions(config, outdir)
        inputs += as_inputs
        lifted, clamp_count = _lift_batch(W1, raw, config.box_low, config.box_high)

        payload = _hf_payload(config, mesh)
        solver = functools.partial(_solve_one, payload)
        sweep = config.rom["mode_sweep"]

        def rom_qoi(rom, morphed):
            return qoi_of(rom, morphed)

        rows_rom_raw, f1 = error_report(basis_rom, raw, solver, sweep, qoi_fn=rom_qoi)
        rows_as_lift, f2 = error_report(basis_as, lifted, solver, sweep, qoi_fn=rom_qoi)
        rows_rom_lift, f3 = error_report(basis_rom, lifted, solver, sweep, qoi_fn=rom_qoi)

        p_rom = out / "errors_rom.csv"
        p_as = out / "errors_rom_as.csv"
        p_rom_lift = out / "errors_rom_aslifted.csv"
        write_error_report(rows_rom_raw, "rom", p_rom)
        write_error_report(rows_as_lift, "rom_as", p_as)
        write_error_report(rows_rom_lift, "rom", p_rom_lift)
        p_qoi = out / "qoi_errors.csv"
        with open(p_qoi, "w") as fh:
            fh.write("N,err_qoi,variant,test_set\n")
            for rows, variant, base in (
                (rows_rom_raw, "rom", "raw"),
                (rows_as_lift, "rom_as", "as_lifted"),
                (rows_rom_lift, "rom", "as_lifted"),
            ):
                for r in rows:
                    fh.write(f"{r.N},{_fmt(r.err_qoi)},{variant},{base}\n")
    update_manifest(
        out,
        "evaluate",
        config.config_hash,
        inputs=inputs,
        outputs=[p_rom, p_as, p_rom_lift, p_qoi],
        wall_clock=t.elapsed,
        stats={
            "n_failures": len(f1) + len(f2) + len(f3),
            "clamped_components": clamp_count,
        },
    )
    return [p_rom, p_as, p_rom_lift, p_qoi]
