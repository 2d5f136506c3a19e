"""Per-cell shape quality: circumradius over twice the inradius.

The ratio is 1 for equilateral triangles and grows without bound as a cell
degenerates; a zero-inradius cell reports infinity.
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class AspectRatioReport:
    ratios: np.ndarray
    min: float
    max: float
    mean: float
    fraction_above_reference: float | None = None


def aspect_ratios(mesh):
    """Circumradius / (2 * inradius) for every triangle."""
    p = mesh.nodes
    t = mesh.triangles
    a = np.linalg.norm(p[t[:, 1]] - p[t[:, 2]], axis=1)
    b = np.linalg.norm(p[t[:, 2]] - p[t[:, 0]], axis=1)
    c = np.linalg.norm(p[t[:, 0]] - p[t[:, 1]], axis=1)
    area = np.abs(mesh.signed_areas())
    s = 0.5 * (a + b + c)
    with np.errstate(divide="ignore", invalid="ignore"):
        circum = a * b * c / (4.0 * area)
        inr = area / s
        ratios = np.where(area > 0.0, circum / (2.0 * inr), np.inf)
    return ratios


def aspect_ratio_report(mesh, reference_max=None, relative_guard=1e-6):
    """Summary statistics, optionally with the fraction above a reference max.

    The comparison carries a small relative guard: cells whose nodes are
    pinned by the morph to 1e-9 keep their ratio only to ~1e-8 relative,
    so exceedances below the guard are measurement noise, not distortion.
    """
    r = aspect_ratios(mesh)
    frac = None
    if reference_max is not None:
        frac = float(np.mean(r > reference_max * (1.0 + relative_guard)))
    finite = r[np.isfinite(r)]
    return AspectRatioReport(
        ratios=r,
        min=float(np.min(r)),
        max=float(np.max(finite)) if finite.size else float("inf"),
        mean=float(np.mean(r)),
        fraction_above_reference=frac,
    )
