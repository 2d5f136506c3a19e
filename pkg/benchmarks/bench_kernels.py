"""Benchmark the compiled kernels against the pure-numpy fallback.

Times the per-Newton-iterate hot path (advection + Jacobian coupling local
matrices) and the morph displacement kernel on meshes of growing size.
Run:  python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from asrom.geometry import bifurcation_control_points, generate_bifurcation_mesh
from asrom.kernels import numba_backend, numpy_backend, triangle_geometry
from asrom.fem import build_space

RESOLUTIONS = [8, 16, 32]
REPEAT = 5


def _time(fn, *args):
    fn(*args)  # warm-up (JIT compile for the numba path)
    best = np.inf
    for _ in range(REPEAT):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    print(f"{'kernel':<24}{'res':>5}{'cells':>8}{'numpy':>12}{'numba':>12}{'speedup':>9}")
    for res in RESOLUTIONS:
        mesh = generate_bifurcation_mesh(4.0, 6.0, 2.0, 30.0, res)
        space = build_space(mesh)
        det, inv_jt = triangle_geometry(mesh.nodes, space.triangles)
        rng = np.random.default_rng(0)
        w = rng.standard_normal(space.n_velocity)
        w1e = np.ascontiguousarray(w[space.cells6])
        w2e = np.ascontiguousarray(w[space.n_scalar + space.cells6])

        cases = [
            ("advection_local", (det, inv_jt, w1e, w2e),
             numpy_backend.convection_local, numba_backend.convection_local),
            ("grad_coupling_local", (det, inv_jt, w1e, w2e),
             numpy_backend.gradient_coupling_local,
             numba_backend.gradient_coupling_local),
            ("stiffness_mass_local", (det, inv_jt),
             numpy_backend.stiffness_mass_local,
             numba_backend.stiffness_mass_local),
        ]
        for name, args, f_np, f_nb in cases:
            t_np = _time(f_np, *args)
            t_nb = _time(f_nb, *args)
            print(
                f"{name:<24}{res:>5}{space.triangles.shape[0]:>8}"
                f"{t_np * 1e3:>10.2f}ms{t_nb * 1e3:>10.2f}ms{t_np / t_nb:>8.1f}x"
            )

        layout = bifurcation_control_points(4.0, 6.0, 2.0, 30.0, res, 10)
        G = rng.standard_normal((layout.cps.n_points, 2))
        args = (mesh.nodes, layout.cps.positions, G, 2.0)
        t_np = _time(numpy_backend.rbf_displace, *args)
        t_nb = _time(numba_backend.rbf_displace, *args)
        print(
            f"{'rbf_displace':<24}{res:>5}{mesh.num_nodes:>8}"
            f"{t_np * 1e3:>10.2f}ms{t_nb * 1e3:>10.2f}ms{t_np / t_nb:>8.1f}x"
        )


if __name__ == "__main__":
    main()
