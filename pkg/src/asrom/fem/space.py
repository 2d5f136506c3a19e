"""Quadratic-velocity / linear-pressure function space on a triangle mesh.

Scalar velocity unknowns live at vertices and edge midpoints; the two
components are stacked (x block then y block).  Pressure unknowns live at
vertices.  Edge numbering is the lexicographic order of sorted vertex
pairs, so the dof layout is a pure function of the connectivity and is
shared by all morphs of one reference mesh.
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError


@dataclass
class TaylorHoodSpace:
    triangles: np.ndarray          # (nc, 3)
    edges: np.ndarray              # (ne, 2) sorted pairs, lexicographic
    cells6: np.ndarray             # (nc, 6) scalar dofs [v0 v1 v2 e01 e12 e20]
    n_vertices: int
    dirichlet_inlet: np.ndarray    # scalar dofs on the inlet
    dirichlet_wall: np.ndarray     # scalar dofs on walls
    outlet_scalar: np.ndarray      # scalar dofs on outlet edges (may overlap walls)
    free_scalar: np.ndarray = field(init=False)
    free_velocity: np.ndarray = field(init=False)

    def __post_init__(self):
        ns = self.n_scalar
        constrained = np.zeros(ns, dtype=bool)
        constrained[self.dirichlet_inlet] = True
        constrained[self.dirichlet_wall] = True
        self.free_scalar = np.nonzero(~constrained)[0]
        self.free_velocity = np.concatenate(
            [self.free_scalar, ns + self.free_scalar]
        )

    @property
    def n_edges(self):
        return self.edges.shape[0]

    @property
    def n_scalar(self):
        return self.n_vertices + self.n_edges

    @property
    def n_velocity(self):
        return 2 * self.n_scalar

    @property
    def n_pressure(self):
        return self.n_vertices

    def constrained_scalar(self):
        return np.unique(np.concatenate([self.dirichlet_inlet, self.dirichlet_wall]))

    def scalar_dof_coords(self, mesh):
        """Coordinates of all scalar dofs on a (possibly morphed) mesh."""
        mids = 0.5 * (mesh.nodes[self.edges[:, 0]] + mesh.nodes[self.edges[:, 1]])
        return np.vstack([mesh.nodes, mids])


def build_space(mesh):
    """Deterministic dof maps for the given mesh."""
    tris = np.asarray(mesh.triangles, dtype=np.int64)
    nv = mesh.num_nodes

    pair_list = []
    for a, b, c in tris:
        pair_list.extend(
            (
                (min(a, b), max(a, b)),
                (min(b, c), max(b, c)),
                (min(c, a), max(c, a)),
            )
        )
    unique_pairs = sorted(set(pair_list))
    edge_id = {pair: k for k, pair in enumerate(unique_pairs)}
    edges = np.array(unique_pairs, dtype=np.int64)

    cells6 = np.zeros((tris.shape[0], 6), dtype=np.int64)
    cells6[:, :3] = tris
    for c, (a, b, d) in enumerate(tris):
        cells6[c, 3] = nv + edge_id[(min(a, b), max(a, b))]
        cells6[c, 4] = nv + edge_id[(min(b, d), max(b, d))]
        cells6[c, 5] = nv + edge_id[(min(d, a), max(d, a))]

    def boundary_scalar_dofs(tag):
        sel = mesh.boundary_tags == tag
        dofs = set()
        for a, b in mesh.boundary_edges[sel]:
            key = (min(int(a), int(b)), max(int(a), int(b)))
            if key not in edge_id:
                raise ConfigError("boundary edge missing from triangulation")
            dofs.update((int(a), int(b), nv + edge_id[key]))
        return np.array(sorted(dofs), dtype=np.int64)

    inlet = boundary_scalar_dofs("inlet")
    wall = boundary_scalar_dofs("wall")
    outlet = np.union1d(
        boundary_scalar_dofs("outlet_left"), boundary_scalar_dofs("outlet_right")
    )

    return TaylorHoodSpace(
        triangles=tris,
        edges=edges,
        cells6=cells6,
        n_vertices=nv,
        dirichlet_inlet=inlet,
        dirichlet_wall=wall,
        outlet_scalar=outlet,
    )


def inlet_lifting(space, mesh, physics):
    """Velocity vector holding the parabolic inflow at inlet dofs, zero elsewhere.

    The profile peaks at `physics.inlet_peak` mid-span and vanishes at the
    inlet corners, directed along the inward inlet normal.  It doubles as
    the Dirichlet lifting: subtracting it homogenizes all constrained dofs.
    """
    sel = mesh.boundary_tags == "inlet"
    inlet_edges = mesh.boundary_edges[sel]
    if inlet_edges.size == 0:
        return np.zeros(space.n_velocity)

    # chain endpoints = nodes of degree 1 among inlet edges
    deg = {}
    for a, b in inlet_edges:
        deg[int(a)] = deg.get(int(a), 0) + 1
        deg[int(b)] = deg.get(int(b), 0) + 1
    ends = [v for v, d in deg.items() if d == 1]
    if len(ends) != 2:
        raise ConfigError("inlet edges do not form a single chain")
    p0 = mesh.nodes[ends[0]]
    span = mesh.nodes[ends[1]] - p0
    span2 = float(span @ span)

    # inward direction: opposite of the outward normal of the oriented edges
    t = mesh.nodes[inlet_edges[0][1]] - mesh.nodes[inlet_edges[0][0]]
    outward = np.array([t[1], -t[0]])
    inward = -outward / np.linalg.norm(outward)

    coords = space.scalar_dof_coords(mesh)
    lift = np.zeros(space.n_velocity)
    for s in space.dirichlet_inlet:
        tpar = float((coords[s] - p0) @ span) / span2
        val = physics.inlet_peak * 4.0 * tpar * (1.0 - tpar)
        lift[s] = val * inward[0]
        lift[space.n_scalar + s] = val * inward[1]
    return lift
