"""Default control-point layout for the bifurcation geometry.

Movable points sit on the branch walls in the narrowing zone, in opposing
outer/inner pairs at shared axial stations (odd per-branch counts put the
extra point on the outer wall).  Anchors pin the inlet and outlet boundary
nodes exactly plus a few wall nodes between the narrowing zone and the
far boundaries, so the ends of the channel stay put under morphing.

Parameter ordering: indices 0 .. m/2-1 drive the upper branch, the rest the
lower branch, with identical within-branch layout; a parameter vector that
is equal across the two halves produces a mirror-symmetric deformation.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError
from .mesh import _BifurcationGrid
from .rbf import ControlPointSet


@dataclass
class ControlPointLayout:
    """Control points plus their mesh bookkeeping.

    cps : the ControlPointSet (movable rows first)
    movable_node_ids : mesh node index of each movable point
    opposing_pairs : (outer, inner) movable-index pairs at shared stations
    """

    cps: ControlPointSet
    movable_node_ids: list
    opposing_pairs: list


def bifurcation_control_points(
    inlet_length, branch_length, channel_width, branch_angle, resolution, n_movable=10
):
    """Control-point layout matching the generate_bifurcation_mesh call."""
    if n_movable < 2 or n_movable % 2 != 0:
        raise ConfigError("n_movable must be even (the branches split it evenly)")
    grid = _BifurcationGrid(
        inlet_length, branch_length, channel_width, branch_angle, resolution
    )
    nodes = grid.build_nodes()
    per_branch = n_movable // 2
    n_outer = (per_branch + 1) // 2
    n_inner = per_branch // 2
    cols = grid.narrowing_columns(n_outer)

    def branch_points(node_fn, outer_normal, inner_normal):
        ids, normals = [], []
        for s in range(n_outer):
            ids.append(node_fn(cols[s], grid.kb))
            normals.append(outer_normal)
            if s < n_inner:
                ids.append(node_fn(cols[s], 0))
                normals.append(inner_normal)
        return ids, normals

    th = grid.theta
    up_outer = np.array([-np.sin(th), np.cos(th)])
    up_inner = np.array([np.sin(th), -np.cos(th)])
    lo_outer = np.array([-np.sin(th), -np.cos(th)])
    lo_inner = np.array([np.sin(th), np.cos(th)])

    up_ids, up_normals = branch_points(grid.upper_node, up_outer, up_inner)
    lo_ids, lo_normals = branch_points(grid.lower_node, lo_outer, lo_inner)
    movable_ids = up_ids + lo_ids
    normals = np.array(up_normals + lo_normals)

    pairs = []
    for s in range(n_inner):
        pairs.append((2 * s, 2 * s + 1))
        pairs.append((per_branch + 2 * s, per_branch + 2 * s + 1))

    fixed_ids = []
    for j in range(grid.k + 1):
        fixed_ids.append(grid.inlet_node(0, j))
    for j in range(grid.kb + 1):
        # outlet columns and the column starting the stretched end cells:
        # pinning both freezes the worst-quality cells entirely
        fixed_ids.append(grid.upper_node(grid.nxb, j))
        fixed_ids.append(grid.lower_node(grid.nxb, j))
        fixed_ids.append(grid.upper_node(grid.nxb - 1, j))
        fixed_ids.append(grid.lower_node(grid.nxb - 1, j))
    # junction corners and duct wall anchors
    fixed_ids.append(grid.inlet_node(grid.nx, 0))
    fixed_ids.append(grid.inlet_node(grid.nx, grid.k))
    for f in (1.0 / 3.0, 2.0 / 3.0):
        c = min(max(1, round(f * grid.nx)), grid.nx - 1)
        fixed_ids.append(grid.inlet_node(c, 0))
        fixed_ids.append(grid.inlet_node(c, grid.k))
    # branch wall anchors between the narrowing zone and the outlets
    for f in (0.7, 0.9):
        c = min(max(max(cols) + 1, round(f * grid.nxb_uniform)), grid.nxb - 1)
        for jrow in (0, grid.kb):
            fixed_ids.append(grid.upper_node(c, jrow))
            fixed_ids.append(grid.lower_node(c, jrow))

    seen = set(movable_ids)
    unique_fixed = []
    for i in fixed_ids:
        if i not in seen:
            seen.add(i)
            unique_fixed.append(i)

    ids = movable_ids + unique_fixed
    positions = nodes[np.array(ids, dtype=np.int64)]
    cps = ControlPointSet(positions, n_movable, normals)
    return ControlPointLayout(cps, movable_ids, pairs)


def opposing_gap(mesh, layout, pair):
    """Signed perpendicular gap of an opposing movable pair on a mesh.

    Projects the inner-to-outer node separation onto the outer outward
    normal; on the reference mesh this equals the local perpendicular
    channel width, and narrowing both walls by mu reduces it by 2 mu.
    """
    i_out, i_in = pair
    p_out = mesh.nodes[layout.movable_node_ids[i_out]]
    p_in = mesh.nodes[layout.movable_node_ids[i_in]]
    return float((p_out - p_in) @ layout.cps.normals[i_out])
