"""Triangulated 2D channel geometries with tagged boundaries and cut sections.

The bifurcation generator builds a symmetric Y-shaped channel: a straight
inlet duct of width `channel_width` that splits at an apex into two straight
branches of half width, diverging at +/- `branch_angle`.  Branch cross
sections are vertical segments, so every transverse cut used for pressure
averaging is a chain of mesh edges.  Six cuts are laid out as: S0 near the
inlet, S3 just before the apex, S4/S5 downstream of the narrowing zone in
the upper/lower branch, S1/S2 near the two outlets.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError

BOUNDARY_TAGS = ("inlet", "wall", "outlet_left", "outlet_right")


@dataclass
class Mesh:
    """Triangle mesh with tagged boundary edges and six transverse sections.

    nodes : (n, 2) float array
    triangles : (t, 3) int array, counterclockwise
    boundary_edges : (b, 2) int array, oriented with the domain on the left
    boundary_tags : (b,) array of tag strings from BOUNDARY_TAGS
    sections : list of six (k, 2) int edge arrays, S0..S5
    """

    nodes: np.ndarray
    triangles: np.ndarray
    boundary_edges: np.ndarray
    boundary_tags: np.ndarray
    sections: list = field(default_factory=list)

    @property
    def num_nodes(self):
        return self.nodes.shape[0]

    @property
    def num_triangles(self):
        return self.triangles.shape[0]

    def signed_areas(self):
        p0 = self.nodes[self.triangles[:, 0]]
        e1 = self.nodes[self.triangles[:, 1]] - p0
        e2 = self.nodes[self.triangles[:, 2]] - p0
        return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])

    def validate(self):
        """Check structural invariants; raises ConfigError on violation."""
        n = self.num_nodes
        if self.triangles.min() < 0 or self.triangles.max() >= n:
            raise ConfigError("triangle node index out of range")
        if self.boundary_edges.size and (
            self.boundary_edges.min() < 0 or self.boundary_edges.max() >= n
        ):
            raise ConfigError("boundary edge node index out of range")
        areas = self.signed_areas()
        if not np.all(areas > 0.0):
            bad = int(np.argmin(areas))
            raise ConfigError(f"triangle {bad} has non-positive area {areas[bad]}")
        for tag in np.unique(self.boundary_tags):
            if tag not in BOUNDARY_TAGS:
                raise ConfigError(f"unknown boundary tag {tag!r}")
        # each boundary edge must belong to exactly one triangle
        tri_edges = directed_edge_set(self.triangles)
        for a, b in self.boundary_edges:
            if (int(a), int(b)) not in tri_edges:
                raise ConfigError(f"boundary edge ({a},{b}) not a triangle edge")
            if (int(b), int(a)) in tri_edges:
                raise ConfigError(f"boundary edge ({a},{b}) is interior")
        seen = set()
        for sec in self.sections:
            if not _is_connected_chain(sec):
                raise ConfigError("section edges do not form a single chain")
            for a, b in sec:
                key = (min(int(a), int(b)), max(int(a), int(b)))
                if key in seen:
                    raise ConfigError("sections are not pairwise disjoint")
                seen.add(key)

    def boundary_nodes(self, tag=None):
        """Node indices on boundary edges, optionally filtered by tag."""
        if tag is None:
            edges = self.boundary_edges
        else:
            edges = self.boundary_edges[self.boundary_tags == tag]
        return np.unique(edges)

    def outward_node_normals(self):
        """Unit outward normals at boundary nodes, averaged over incident edges.

        Returns a dict {node index: (2,) unit vector}.  On straight wall
        segments the average equals the exact wall normal.
        """
        acc = {}
        for a, b in self.boundary_edges:
            t = self.nodes[b] - self.nodes[a]
            nrm = np.array([t[1], -t[0]])
            for v in (int(a), int(b)):
                acc[v] = acc.get(v, np.zeros(2)) + nrm
        return {v: vec / np.linalg.norm(vec) for v, vec in acc.items()}


def directed_edge_set(triangles):
    edges = set()
    for tri in triangles:
        a, b, c = (int(tri[0]), int(tri[1]), int(tri[2]))
        edges.update(((a, b), (b, c), (c, a)))
    return edges


def _is_connected_chain(edges):
    if len(edges) == 0:
        return False
    deg = {}
    for a, b in edges:
        deg[int(a)] = deg.get(int(a), 0) + 1
        deg[int(b)] = deg.get(int(b), 0) + 1
    odd = [v for v, d in deg.items() if d == 1]
    return len(odd) == 2 and all(d <= 2 for d in deg.values())


def _extract_boundary(triangles):
    """Boundary edges oriented as they appear in their (unique) triangle."""
    count = {}
    order = []
    for tri in triangles:
        a, b, c = (int(tri[0]), int(tri[1]), int(tri[2]))
        for e in ((a, b), (b, c), (c, a)):
            key = (min(e), max(e))
            if key in count:
                count[key] = None  # interior
            else:
                count[key] = e
                order.append(key)
    return np.array([count[k] for k in order if count[k] is not None], dtype=np.int64)


class _BifurcationGrid:
    """Structured index layout behind the bifurcation generator."""

    def __init__(self, inlet_length, branch_length, channel_width, branch_angle, resolution):
        if min(inlet_length, branch_length, channel_width) <= 0.0:
            raise ConfigError("geometric parameters must be positive")
        if not (0.0 < branch_angle < 80.0):
            raise ConfigError("branch_angle must lie in (0, 80) degrees")
        if resolution < 4:
            raise ConfigError("resolution must be at least 4 elements across the width")
        if resolution % 2 != 0:
            raise ConfigError("resolution must be even (a node row is needed on the axis)")

        self.W = float(channel_width)
        self.L = float(inlet_length)
        self.Lb = float(branch_length)
        self.theta = math.radians(branch_angle)
        self.k = int(resolution)
        self.kb = self.k // 2
        h = self.W / self.k
        self.nx = max(3, round(self.L / h))
        self.h = h

        # branch columns: a uniform body followed by a three-column graded
        # outflow extension (axial growth 1.8/2.7/4.0).  The stretched end
        # cells deliberately own the mesh's worst aspect ratio, far away
        # from the narrowing zone, like the far-field of an unstructured
        # mesh would.
        grading = (1.8, 2.7, 4.0)
        self.nxb_uniform = max(4, round(self.Lb / h - sum(grading)))
        spacings = [1.0] * self.nxb_uniform + list(grading)
        scale = self.Lb / (h * sum(spacings))
        self.axial_steps = np.array(spacings) * h * scale
        self.axial_stations = np.concatenate([[0.0], np.cumsum(self.axial_steps)])
        self.nxb = len(self.axial_steps)

        # node counts: inlet grid, then new nodes of upper/lower branches
        self.n_inlet = (self.nx + 1) * (self.k + 1)
        self.n_branch = self.nxb * (self.kb + 1)

        d = np.array([math.cos(self.theta), math.sin(self.theta)])
        if d[0] * self.kb <= 0.0:
            raise ConfigError("branch geometry self-intersects")
        self.branch_dir = d

        # transverse offsets, exactly antisymmetric about the axis
        y = np.zeros(self.k + 1)
        for dd in range(1, self.kb + 1):
            y[self.kb + dd] = dd * h
            y[self.kb - dd] = -y[self.kb + dd]
        self.y_rows = y

    # ---- node index helpers -------------------------------------------------
    def inlet_node(self, i, j):
        return i * (self.k + 1) + j

    def upper_node(self, i, j):
        if i == 0:
            return self.inlet_node(self.nx, self.kb + j)
        return self.n_inlet + (i - 1) * (self.kb + 1) + j

    def lower_node(self, i, j):
        if i == 0:
            return self.inlet_node(self.nx, self.kb - j)
        return self.n_inlet + self.n_branch + (i - 1) * (self.kb + 1) + j

    def build_nodes(self):
        n_total = self.n_inlet + 2 * self.n_branch
        nodes = np.zeros((n_total, 2))
        for i in range(self.nx + 1):
            x = i * self.L / self.nx
            for j in range(self.k + 1):
                nodes[self.inlet_node(i, j)] = (x, self.y_rows[j])
        apex = np.array([self.L, 0.0])
        for i in range(1, self.nxb + 1):
            base = apex + self.axial_stations[i] * self.branch_dir
            for j in range(self.kb + 1):
                up = base + np.array([0.0, j * self.h])
                nodes[self.upper_node(i, j)] = up
                nodes[self.lower_node(i, j)] = (up[0], -up[1])
        return nodes

    def build_triangles(self):
        tris = []

        def split(n00, n10, n11, n01):
            tris.append((n00, n10, n11))
            tris.append((n00, n11, n01))

        def split_mirror(n00, n10, n11, n01):
            # reflected copy of `split`, reordered to stay counterclockwise
            tris.append((n00, n11, n10))
            tris.append((n00, n01, n11))

        def split_short(n00, n10, n11, n01):
            # the other diagonal: on the sheared branch cells this yields
            # near-equilateral triangles (exactly equilateral at 30 degrees)
            tris.append((n00, n10, n01))
            tris.append((n10, n11, n01))

        def split_short_mirror(n00, n10, n11, n01):
            tris.append((n00, n01, n10))
            tris.append((n10, n01, n11))

        for i in range(self.nx):
            for j in range(self.kb, self.k):
                split(
                    self.inlet_node(i, j),
                    self.inlet_node(i + 1, j),
                    self.inlet_node(i + 1, j + 1),
                    self.inlet_node(i, j + 1),
                )
                jm = self.k - j  # mirrored row: cell (j .. j+1) -> (jm-1 .. jm)
                split_mirror(
                    self.inlet_node(i, jm),
                    self.inlet_node(i + 1, jm),
                    self.inlet_node(i + 1, jm - 1),
                    self.inlet_node(i, jm - 1),
                )
        for i in range(self.nxb):
            for j in range(self.kb):
                split_short(
                    self.upper_node(i, j),
                    self.upper_node(i + 1, j),
                    self.upper_node(i + 1, j + 1),
                    self.upper_node(i, j + 1),
                )
                split_short_mirror(
                    self.lower_node(i, j),
                    self.lower_node(i + 1, j),
                    self.lower_node(i + 1, j + 1),
                    self.lower_node(i, j + 1),
                )
        return np.array(tris, dtype=np.int64)

    def node_groups(self):
        inlet = {self.inlet_node(0, j) for j in range(self.k + 1)}
        out_left = {self.upper_node(self.nxb, j) for j in range(self.kb + 1)}
        out_right = {self.lower_node(self.nxb, j) for j in range(self.kb + 1)}
        return inlet, out_left, out_right

    def vertical_chain(self, node_fn, column, rows):
        return np.array(
            [(node_fn(column, j), node_fn(column, j + 1)) for j in range(rows)],
            dtype=np.int64,
        )

    def section_columns(self):
        i0 = min(max(1, round(0.12 * self.nx)), self.nx - 2)
        i3 = max(min(self.nx - 1, round(0.88 * self.nx)), i0 + 1)
        if not (1 <= i0 < i3 <= self.nx - 1):
            raise ConfigError("inlet too short for distinct S0/S3 sections")
        c1 = min(self.nxb_uniform - 1, round(0.9 * self.nxb_uniform))
        c4 = min(max(1, round(0.7 * self.nxb_uniform)), c1 - 1)
        if not (1 <= c4 < c1 <= self.nxb - 1):
            raise ConfigError("branches too short for distinct S4/S1 sections")
        return i0, i3, c4, c1

    def build_sections(self):
        i0, i3, c4, c1 = self.section_columns()
        s0 = self.vertical_chain(self.inlet_node, i0, self.k)
        s3 = self.vertical_chain(self.inlet_node, i3, self.k)
        s1 = self.vertical_chain(self.upper_node, c1, self.kb)
        s2 = self.vertical_chain(self.lower_node, c1, self.kb)
        s4 = self.vertical_chain(self.upper_node, c4, self.kb)
        s5 = self.vertical_chain(self.lower_node, c4, self.kb)
        return [s0, s1, s2, s3, s4, s5]

    def narrowing_columns(self, n_stations):
        """Distinct branch grid columns for the movable wall stations."""
        if n_stations == 1:
            fracs = [0.3]
        else:
            fracs = [0.15 + 0.3 * s / (n_stations - 1) for s in range(n_stations)]
        cols = []
        for f in fracs:
            c = min(max(1, round(f * self.nxb_uniform)), self.nxb_uniform - 1)
            while c in cols:
                c += 1
            if c > self.nxb_uniform - 1:
                raise ConfigError("branch resolution too coarse for the movable stations")
            cols.append(c)
        return cols


def generate_bifurcation_mesh(
    inlet_length, branch_length, channel_width, branch_angle, resolution
):
    """Symmetric Y-bifurcation channel mesh.

    branch_angle is in degrees; resolution counts elements across the full
    inlet width and must be even.  The returned mesh satisfies every Mesh
    invariant and is bitwise mirror-symmetric about the inlet axis.
    """
    grid = _BifurcationGrid(
        inlet_length, branch_length, channel_width, branch_angle, resolution
    )
    nodes = grid.build_nodes()
    triangles = grid.build_triangles()
    boundary = _extract_boundary(triangles)

    inlet_set, left_set, right_set = grid.node_groups()
    tags = []
    for a, b in boundary:
        a, b = int(a), int(b)
        if a in inlet_set and b in inlet_set:
            tags.append("inlet")
        elif a in left_set and b in left_set:
            tags.append("outlet_left")
        elif a in right_set and b in right_set:
            tags.append("outlet_right")
        else:
            tags.append("wall")

    mesh = Mesh(
        nodes=nodes,
        triangles=triangles,
        boundary_edges=boundary,
        boundary_tags=np.array(tags),
        sections=grid.build_sections(),
    )
    mesh.validate()
    return mesh


def generate_channel_mesh(length, height, resolution, section_fractions=None):
    """Straight rectangular channel [0,L] x [0,H] with the same tagging scheme.

    The outlet is tagged outlet_right; sections are vertical cuts at the
    given fractions of the length (six by default).
    """
    if min(length, height) <= 0.0 or resolution < 2:
        raise ConfigError("invalid channel parameters")
    k = int(resolution)
    h = height / k
    nx = max(2, round(length / h))
    if section_fractions is None:
        section_fractions = [0.15, 0.3, 0.45, 0.6, 0.75, 0.9]

    def node(i, j):
        return i * (k + 1) + j

    nodes = np.zeros(((nx + 1) * (k + 1), 2))
    for i in range(nx + 1):
        for j in range(k + 1):
            nodes[node(i, j)] = (i * length / nx, j * height / k)
    tris = []
    for i in range(nx):
        for j in range(k):
            n00, n10 = node(i, j), node(i + 1, j)
            n11, n01 = node(i + 1, j + 1), node(i, j + 1)
            tris.append((n00, n10, n11))
            tris.append((n00, n11, n01))
    triangles = np.array(tris, dtype=np.int64)
    boundary = _extract_boundary(triangles)
    tags = []
    for a, b in boundary:
        xa, xb = nodes[a, 0], nodes[b, 0]
        if xa == 0.0 and xb == 0.0:
            tags.append("inlet")
        elif xa == length and xb == length:
            tags.append("outlet_right")
        else:
            tags.append("wall")
    sections = []
    for f in section_fractions:
        c = min(max(1, round(f * nx)), nx - 1)
        sections.append(
            np.array([(node(c, j), node(c, j + 1)) for j in range(k)], dtype=np.int64)
        )
    mesh = Mesh(
        nodes=nodes,
        triangles=triangles,
        boundary_edges=boundary,
        boundary_tags=np.array(tags),
        sections=sections,
    )
    mesh.validate()
    return mesh


# ---- text serialization -----------------------------------------------------

def _fmt(x):
    return format(float(x), ".17g")


def write_mesh(mesh, path):
    """Write the line-oriented mesh text format (bit-exact round trip)."""
    lines = ["MESH2D v1"]
    lines.append(f"NODES {mesh.num_nodes}")
    for i, (x, y) in enumerate(mesh.nodes):
        lines.append(f"{i} {_fmt(x)} {_fmt(y)}")
    lines.append(f"CELLS {mesh.num_triangles}")
    for i, (a, b, c) in enumerate(mesh.triangles):
        lines.append(f"{i} {a} {b} {c}")
    lines.append(f"BOUNDARY {len(mesh.boundary_edges)}")
    for (a, b), tag in zip(mesh.boundary_edges, mesh.boundary_tags):
        lines.append(f"{a} {b} {tag}")
    lines.append("SECTIONS 6")
    for s, sec in enumerate(mesh.sections):
        for a, b in sec:
            lines.append(f"S{s} {a} {b}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_mesh(path):
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if lines[0] != "MESH2D v1":
        raise ConfigError(f"not a MESH2D v1 file: {path}")
    pos = 1

    def expect_block(name):
        nonlocal pos
        head = lines[pos].split()
        if head[0] != name:
            raise ConfigError(f"expected {name} block, got {lines[pos]!r}")
        pos += 1
        return int(head[1])

    n = expect_block("NODES")
    nodes = np.zeros((n, 2))
    for _ in range(n):
        i, x, y = lines[pos].split()
        nodes[int(i)] = (float(x), float(y))
        pos += 1
    t = expect_block("CELLS")
    triangles = np.zeros((t, 3), dtype=np.int64)
    for _ in range(t):
        i, a, b, c = lines[pos].split()
        triangles[int(i)] = (int(a), int(b), int(c))
        pos += 1
    b = expect_block("BOUNDARY")
    edges = np.zeros((b, 2), dtype=np.int64)
    tags = []
    for r in range(b):
        a_, b_, tag = lines[pos].split()
        edges[r] = (int(a_), int(b_))
        tags.append(tag)
        pos += 1
    ns = expect_block("SECTIONS")
    secs = [[] for _ in range(ns)]
    while pos < len(lines):
        name, a_, b_ = lines[pos].split()
        secs[int(name[1:])].append((int(a_), int(b_)))
        pos += 1
    sections = [np.array(s, dtype=np.int64) for s in secs]
    return Mesh(nodes, triangles, edges, np.array(tags), sections)
