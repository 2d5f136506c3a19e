from .io import (
    read_pod_basis,
    write_error_report,
    write_pod_basis,
    write_singular_values,
)
from .pod import pod, projection_error_sq, reorthonormalize
from .reduced import (
    ReducedOperators,
    ROMSolution,
    project_convection,
    project_operators,
    reduced_inf_sup,
    rom_solve,
)
from .report import ErrorRow, error_report
from .snapshots import PODBasis, SnapshotSet, build_reduced_spaces, collect_snapshots

__all__ = [
    "ErrorRow",
    "PODBasis",
    "ROMSolution",
    "ReducedOperators",
    "SnapshotSet",
    "build_reduced_spaces",
    "collect_snapshots",
    "error_report",
    "pod",
    "project_convection",
    "project_operators",
    "projection_error_sq",
    "read_pod_basis",
    "reduced_inf_sup",
    "reorthonormalize",
    "rom_solve",
    "write_error_report",
    "write_pod_basis",
    "write_singular_values",
]
