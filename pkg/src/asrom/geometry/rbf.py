"""Thin-plate-spline mesh morphing driven by wall control points.

The morph map is an affine part plus a radial sum over control points,
x -> c + Q x + sum_i gamma_i phi(|x - x_i|; R), solved so that every
control point lands exactly on its target while the radial weights carry
no net force or moment.  Movable points sit on the channel walls and are
displaced inward along the outward wall normal by their parameter value,
narrowing the channel like a growing occlusion.
"""

import numpy as np

from .. import kernels
from ..errors import ConfigError, MorphInversionError, SingularSystemError
from .mesh import Mesh


def thin_plate_spline(r, radius):
    """Radial kernel (r/R)^2 log(r/R); the r -> 0 limit value 0 is used."""
    if radius <= 0.0:
        raise ConfigError("radius must be positive")
    r = np.asarray(r, dtype=float)
    s = r / radius
    out = np.zeros_like(s)
    nz = s > 0.0
    out[nz] = s[nz] ** 2 * np.log(s[nz])
    if out.ndim == 0:
        return float(out)
    return out


class ControlPointSet:
    """Morphing control points: movable rows first, then fixed anchors.

    positions : (n_c, 2); the first n_movable rows are the movable points
    normals : (n_movable, 2) outward unit wall normals at the movable points
    """

    def __init__(self, positions, n_movable, normals):
        self.positions = np.asarray(positions, dtype=float)
        self.n_movable = int(n_movable)
        self.normals = np.asarray(normals, dtype=float)
        if self.n_movable < 1:
            raise ConfigError("at least one movable control point is required")
        if self.normals.shape != (self.n_movable, 2):
            raise ConfigError("one outward normal per movable point is required")
        lens = np.linalg.norm(self.normals, axis=1)
        if np.any(np.abs(lens - 1.0) > 1e-12):
            raise ConfigError("movable normals must have unit length")

    @property
    def n_points(self):
        return self.positions.shape[0]

    @property
    def n_fixed(self):
        return self.n_points - self.n_movable

    @property
    def movable_flags(self):
        flags = np.zeros(self.n_points, dtype=bool)
        flags[: self.n_movable] = True
        return flags


class MorphConfig:
    """Kernel radius and the admissible parameter box."""

    def __init__(self, radius, box_low, box_high):
        self.radius = float(radius)
        self.box_low = np.atleast_1d(np.asarray(box_low, dtype=float))
        self.box_high = np.atleast_1d(np.asarray(box_high, dtype=float))
        if self.radius <= 0.0:
            raise ConfigError("radius must be positive")
        if self.box_low.shape != self.box_high.shape:
            raise ConfigError("box bounds must have matching shapes")
        if np.any(self.box_low >= self.box_high):
            raise ConfigError("box_low must be strictly below box_high")

    @classmethod
    def default(cls, n_movable, radius):
        return cls(radius, np.zeros(n_movable), np.full(n_movable, 0.3))

    def contains(self, mu):
        mu = np.asarray(mu, dtype=float)
        return bool(np.all(mu >= self.box_low) and np.all(mu <= self.box_high))

    def center(self):
        return 0.5 * (self.box_low + self.box_high)


class RBFCoefficients:
    """Solved morph unknowns: translation c, linear part Q, radial weights G."""

    def __init__(self, c, Q, G):
        self.c = np.asarray(c, dtype=float)
        self.Q = np.asarray(Q, dtype=float)
        self.G = np.asarray(G, dtype=float)


def control_point_targets(cps, mu, config=None):
    """Target positions: fixed points stay, movable move by -mu_i * normal_i."""
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (cps.n_movable,):
        raise ConfigError(
            f"expected {cps.n_movable} parameters, got shape {mu.shape}"
        )
    if config is not None and not config.contains(mu):
        raise ConfigError("parameter vector outside the admissible box")
    targets = cps.positions.copy()
    targets[: cps.n_movable] -= mu[:, None] * cps.normals
    return targets


def _kernel_matrix(pts_a, pts_b, radius):
    diff = pts_a[:, None, :] - pts_b[None, :, :]
    r = np.sqrt(np.sum(diff * diff, axis=2))
    return thin_plate_spline(r, radius)


def solve_rbf(cps, targets, radius):
    """Solve the dense interpolation system for both spatial components.

    The (n_c + 3) x (n_c + 3) saddle system couples the radial weights with
    the affine term through zero-force and zero-moment constraints.  A
    reciprocal condition estimate below 1e-12 is rejected as singular.
    """
    x = cps.positions
    n = cps.n_points
    targets = np.asarray(targets, dtype=float)
    if targets.shape != (n, 2):
        raise ConfigError("targets must match the control point count")

    phi = _kernel_matrix(x, x, radius)
    poly = np.hstack([np.ones((n, 1)), x])  # 1, x, y
    lhs = np.zeros((n + 3, n + 3))
    lhs[:n, :n] = phi
    lhs[:n, n:] = poly
    lhs[n:, :n] = poly.T
    rhs = np.zeros((n + 3, 2))
    rhs[:n] = targets

    # reciprocal condition estimate via 1-norms (cheap at this size)
    try:
        sol = np.linalg.solve(lhs, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"morph interpolation system singular: {exc}")
    cond = np.linalg.cond(lhs, 1)
    if not np.isfinite(cond) or 1.0 / cond < 1e-12:
        raise SingularSystemError(
            "morph interpolation system ill-conditioned "
            f"(reciprocal condition estimate {1.0 / cond:.3e}); "
            "control points may be duplicated or collinear"
        )

    G = sol[:n]
    c = sol[n]
    Q = sol[n + 1 :].T  # rows of sol are the x/y coefficient rows of Q^T
    return RBFCoefficients(c=c, Q=Q, G=G)


def evaluate_map(points, coeffs, cps, radius):
    """Apply the morph map to an (n, 2) array of points."""
    points = np.asarray(points, dtype=float)
    affine = coeffs.c[None, :] + points @ coeffs.Q.T
    radial = kernels.rbf_displace(
        np.ascontiguousarray(points),
        np.ascontiguousarray(cps.positions),
        np.ascontiguousarray(coeffs.G),
        float(radius),
    )
    return affine + radial


def apply_morph(mesh, coeffs, cps, radius):
    """Morph all mesh nodes; connectivity, tags and sections are shared.

    Raises MorphInversionError naming the first inverted cell if the
    deformation folds the mesh.
    """
    new_nodes = evaluate_map(mesh.nodes, coeffs, cps, radius)
    morphed = Mesh(
        nodes=new_nodes,
        triangles=mesh.triangles,
        boundary_edges=mesh.boundary_edges,
        boundary_tags=mesh.boundary_tags,
        sections=mesh.sections,
    )
    areas = morphed.signed_areas()
    if np.any(areas <= 0.0):
        raise MorphInversionError(int(np.argmin(areas)))
    return morphed


def morph_mesh(mesh, cps, mu, config):
    """Convenience chain: targets -> solve -> apply."""
    targets = control_point_targets(cps, mu, config)
    coeffs = solve_rbf(cps, targets, config.radius)
    return apply_morph(mesh, coeffs, cps, config.radius)


def interpolation_residual(coeffs, cps, targets, radius):
    """Max control-point mismatch of the solved map (should be ~1e-9 or less)."""
    mapped = evaluate_map(cps.positions, coeffs, cps, radius)
    return float(np.max(np.linalg.norm(mapped - np.asarray(targets), axis=1)))


def constraint_residuals(coeffs, cps):
    """Residuals of the zero-force and zero-moment constraints on the weights."""
    force = np.abs(coeffs.G.sum(axis=0)).max()
    moment = np.abs(cps.positions.T @ coeffs.G).max()
    return float(force), float(moment)


def morph_locality_report(mesh, morphed, cps, mu, radius, factor=5.0):
    """Check that nodes far from every movable point move less than max(mu).

    Returns (max displacement in the far field, max control displacement,
    number of far-field nodes).
    """
    movable = cps.positions[: cps.n_movable]
    d = mesh.nodes[:, None, :] - movable[None, :, :]
    dist = np.sqrt(np.sum(d * d, axis=2)).min(axis=1)
    far = dist > factor * radius
    disp = np.linalg.norm(morphed.nodes - mesh.nodes, axis=1)
    max_far = float(disp[far].max()) if np.any(far) else 0.0
    return max_far, float(np.max(np.abs(mu))), int(np.sum(far))
