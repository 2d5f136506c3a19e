from .layout import ControlPointLayout, bifurcation_control_points, opposing_gap
from .mesh import (
    BOUNDARY_TAGS,
    Mesh,
    generate_bifurcation_mesh,
    generate_channel_mesh,
    read_mesh,
    write_mesh,
)
from .quality import AspectRatioReport, aspect_ratio_report, aspect_ratios
from .rbf import (
    ControlPointSet,
    MorphConfig,
    RBFCoefficients,
    apply_morph,
    constraint_residuals,
    control_point_targets,
    evaluate_map,
    interpolation_residual,
    morph_locality_report,
    morph_mesh,
    solve_rbf,
    thin_plate_spline,
)

__all__ = [
    "BOUNDARY_TAGS",
    "Mesh",
    "generate_bifurcation_mesh",
    "generate_channel_mesh",
    "read_mesh",
    "write_mesh",
    "ControlPointLayout",
    "bifurcation_control_points",
    "opposing_gap",
    "AspectRatioReport",
    "aspect_ratio_report",
    "aspect_ratios",
    "ControlPointSet",
    "MorphConfig",
    "RBFCoefficients",
    "apply_morph",
    "constraint_residuals",
    "control_point_targets",
    "evaluate_map",
    "interpolation_residual",
    "morph_locality_report",
    "morph_mesh",
    "solve_rbf",
    "thin_plate_spline",
]
