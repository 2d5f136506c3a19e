"""Reference-element tables shared by both kernel backends.

Quadratic (6-node) and linear (3-node) Lagrange bases on the unit
triangle with vertices (0,0), (1,0), (0,1).  Local node order for the
quadratic element: the three vertices followed by the midpoints of
edges (0,1), (1,2), (2,0).
"""

import numpy as np

# 7-point symmetric triangle rule, exact for polynomials up to degree 5.
# Weights sum to 1/2 (the reference triangle area) so that
# integral over a physical cell = |det J| * sum_q w_q f(x_q).
_a1, _b1 = 0.059715871789769820, 0.470142064105115090
_a2, _b2 = 0.797426985353087320, 0.101286507323456340
_w0 = 9.0 / 80.0
_w1 = (155.0 + np.sqrt(15.0)) / 2400.0
_w2 = (155.0 - np.sqrt(15.0)) / 2400.0

QUAD_POINTS = np.array(
    [
        [1.0 / 3.0, 1.0 / 3.0],
        [_b1, _b1],
        [_a1, _b1],
        [_b1, _a1],
        [_b2, _b2],
        [_a2, _b2],
        [_b2, _a2],
    ]
)
QUAD_WEIGHTS = np.array([_w0, _w1, _w1, _w1, _w2, _w2, _w2])

N_QUAD = QUAD_POINTS.shape[0]


def _p2_tables():
    xi = QUAD_POINTS[:, 0]
    eta = QUAD_POINTS[:, 1]
    lam = np.stack([1.0 - xi - eta, xi, eta], axis=1)          # (q, 3)
    dlam = np.array([[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]])    # (3, 2)

    val = np.zeros((N_QUAD, 6))
    grad = np.zeros((N_QUAD, 6, 2))
    for v in range(3):
        val[:, v] = lam[:, v] * (2.0 * lam[:, v] - 1.0)
        grad[:, v, :] = (4.0 * lam[:, v] - 1.0)[:, None] * dlam[v]
    edges = [(0, 1), (1, 2), (2, 0)]
    for k, (i, j) in enumerate(edges):
        val[:, 3 + k] = 4.0 * lam[:, i] * lam[:, j]
        grad[:, 3 + k, :] = 4.0 * (
            lam[:, i][:, None] * dlam[j] + lam[:, j][:, None] * dlam[i]
        )
    return val, grad


def _p1_tables():
    xi = QUAD_POINTS[:, 0]
    eta = QUAD_POINTS[:, 1]
    return np.stack([1.0 - xi - eta, xi, eta], axis=1)


P2_VAL, P2_GRAD = _p2_tables()   # (q, 6), (q, 6, 2) in reference coordinates
P1_VAL = _p1_tables()            # (q, 3)


def triangle_geometry(nodes, triangles):
    """Affine map data per cell: Jacobian determinant and inverse transpose.

    Returns (det (nc,), inv_jt (nc, 2, 2)).  det is signed; counterclockwise
    cells give det > 0 and |det| = 2 * area.
    """
    p0 = nodes[triangles[:, 0]]
    e1 = nodes[triangles[:, 1]] - p0
    e2 = nodes[triangles[:, 2]] - p0
    det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    inv_jt = np.empty((triangles.shape[0], 2, 2))
    # J = [e1 e2] columns; gradients transform with J^{-T}
    inv_jt[:, 0, 0] = e2[:, 1] / det
    inv_jt[:, 0, 1] = -e1[:, 1] / det
    inv_jt[:, 1, 0] = -e2[:, 0] / det
    inv_jt[:, 1, 1] = e1[:, 0] / det
    return det, inv_jt
