from .io import read_hf_solution, read_matrix, write_hf_solution, write_matrix
from .operators import (
    OperatorSet,
    PhysicsConfig,
    assemble_convection,
    assemble_gradient_coupling,
    assemble_operators,
)
from .qoi import SectionPressures, qoi, section_pressure_average, section_pressures
from .solver import (
    HFSolution,
    inf_sup_constant,
    newton_solve,
    residual,
    solve_with_continuation,
    stokes_solve,
    supremizer,
)
from .space import TaylorHoodSpace, build_space, inlet_lifting


def solve_flow(mesh, space, physics, mu=None, **newton_kw):
    """Assemble, solve with continuation fallback, and attach the QoI."""
    from .operators import assemble_operators as _asm
    from .qoi import qoi as _qoi

    ops = _asm(mesh, space, physics)
    sol = solve_with_continuation(ops, **newton_kw)
    sol.mu = mu
    sol.qoi = _qoi(sol, mesh)
    return sol, ops


__all__ = [
    "OperatorSet",
    "PhysicsConfig",
    "TaylorHoodSpace",
    "HFSolution",
    "SectionPressures",
    "assemble_convection",
    "assemble_gradient_coupling",
    "assemble_operators",
    "build_space",
    "inlet_lifting",
    "inf_sup_constant",
    "newton_solve",
    "qoi",
    "read_hf_solution",
    "read_matrix",
    "residual",
    "section_pressure_average",
    "section_pressures",
    "solve_flow",
    "solve_with_continuation",
    "stokes_solve",
    "supremizer",
    "write_hf_solution",
    "write_matrix",
]
